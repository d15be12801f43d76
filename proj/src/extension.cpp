#include "strichlab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "strichlab/errors.hpp"
#include "strichlab/parallel.hpp"
#include "strichlab/special_fn.hpp"

namespace strichlab {

using std::numbers::pi;

namespace {

bool is_graph(SurfaceId id) {
    return id == SurfaceId::paraboloid2 || id == SurfaceId::cone3 || id == SurfaceId::hyperboloid2 ||
           id == SurfaceId::perturbed2;
}

TrialFunction radial_trial(SurfaceId id, std::string name, std::function<double(double)> g, DecayClass decay) {
    if (!is_graph(id)) throw std::invalid_argument("radial trial requires a graph surface");
    TrialFunction t;
    t.surface = id;
    t.name = std::move(name);
    t.decay = decay;
    t.radial = g;
    const int n = surface(id).base_dim;
    t.profile = [g, n](const Point& w) { return Complex(g(w.head(n).norm()), 0.0); };
    return t;
}

// radius beyond which the envelope has dropped by the factor rel
double trial_radius(const DecayClass& d, double rel) {
    const double L = std::log(1.0 / rel);
    switch (d.kind) {
        case DecayClass::Kind::gaussian: return std::sqrt(L / d.rate);
        case DecayClass::Kind::exponential: return L / d.rate;
        case DecayClass::Kind::hyperbolic_exponential: {
            const double c = 1.0 + L / d.rate;
            return std::sqrt(c * c - 1.0);
        }
        case DecayClass::Kind::compact: return d.rate;
    }
    return 0.0;
}

// inverse of an increasing height profile
double height_inverse(const SurfaceMeasure& s, double t) {
    switch (s.id) {
        case SurfaceId::paraboloid2: return t > 0.0 ? std::sqrt(t) : 0.0;
        case SurfaceId::cone3: return std::max(t, 0.0);
        case SurfaceId::hyperboloid2: return t > 1.0 ? std::sqrt(t * t - 1.0) : 0.0;
        case SurfaceId::perturbed2: return t > 0.0 ? std::sqrt(0.5 * (std::sqrt(1.0 + 4.0 * t) - 1.0)) : 0.0;
        default: throw std::logic_error("height_inverse: not a graph surface");
    }
}

constexpr long long kNodeBudget = 40'000'000;

}  // namespace

TrialFunction gaussian_trial(SurfaceId id, double s) {
    return radial_trial(id, "gaussian", [s](double r) { return std::exp(-s * r * r); }, DecayClass::gaussian(s));
}

TrialFunction exponential_trial(SurfaceId id, double s) {
    return radial_trial(id, "exponential", [s](double r) { return std::exp(-s * r); }, DecayClass::exponential(s));
}

TrialFunction hyperboloid_trial(double a) {
    return radial_trial(SurfaceId::hyperboloid2, "hyperbolic",
                        [a](double r) { return std::exp(-a * std::sqrt(1.0 + r * r)); },
                        DecayClass::hyperbolic_exponential(a));
}

TrialFunction disc_indicator_trial(SurfaceId id, double radius) {
    return radial_trial(id, "disc", [radius](double r) { return r <= radius ? 1.0 : 0.0; },
                        DecayClass::compact(radius));
}

TrialFunction quartic_trial(SurfaceId id) {
    // exp(-r^4) <= e^{3/4} exp(-r^2)
    return radial_trial(id, "quartic", [](double r) { return std::exp(-r * r * r * r); },
                        DecayClass::gaussian(1.0, std::exp(0.25)));
}

TrialFunction constant_trial(SurfaceId id, double c) {
    if (!surface(id).is_sphere()) throw std::invalid_argument("constant trial requires a sphere");
    TrialFunction t;
    t.surface = id;
    t.name = "constant";
    t.decay = DecayClass::compact(1.0, std::abs(c));
    t.profile = [c](const Point&) { return Complex(c, 0.0); };
    return t;
}

TrialFunction tabulated_radial_trial(SurfaceId id, std::vector<double> r, std::vector<double> v, std::string name) {
    if (r.size() < 2 || r.size() != v.size()) throw std::invalid_argument("tabulated trial needs >= 2 knots");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw std::invalid_argument("tabulated trial knots must increase");
    if (r.front() < 0.0) throw std::invalid_argument("tabulated trial knots must be nonnegative");
    double amp = 0.0;
    for (double x : v) amp = std::max(amp, std::abs(x));
    const double last = r.back();
    auto g = [r = std::move(r), v = std::move(v)](double x) {
        if (x > r.back()) return 0.0;
        if (x <= r.front()) return v.front();
        const auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - r.begin());
        const double t = (x - r[i - 1]) / (r[i] - r[i - 1]);
        return (1.0 - t) * v[i - 1] + t * v[i];
    };
    return radial_trial(id, std::move(name), g, DecayClass::compact(last, amp));
}

TrialFunction builtin_trial(SurfaceId id, const std::string& name) {
    if (name == "constant") return constant_trial(id);
    if (name == "gaussian") return gaussian_trial(id);
    if (name == "exponential") return exponential_trial(id);
    if (name == "hyperbolic") {
        if (id != SurfaceId::hyperboloid2) throw std::invalid_argument("hyperbolic trial lives on hyperboloid2");
        return hyperboloid_trial(1.0);
    }
    if (name == "disc") return disc_indicator_trial(id);
    if (name == "quartic") return quartic_trial(id);
    throw std::invalid_argument("unknown trial '" + name + "'");
}

Estimate<Complex> extension_transform(const TrialFunction& f, const Point& x, const QuadratureSpec& spec) {
    const SurfaceMeasure& s = surface(f.surface);
    if (x.size() != s.ambient_dim) throw std::invalid_argument("extension_transform: point has wrong dimension");
    const int ref = std::max(1, spec.refine);
    auto phase = [&x](const Point& w) { return std::polar(1.0, -x.dot(w)); };

    if (s.is_sphere()) {
        const double X = x.norm();
        auto run = [&](int n_angle) {
            const int n_polar = std::max(16, n_angle / 2);
            Complex acc{};
            if (s.id == SurfaceId::sphere1) {
                const Rule th = periodic_trapezoid(n_angle, 2.0 * pi);
                Point w(2);
                for (std::size_t i = 0; i < th.size(); ++i) {
                    w << std::cos(th.nodes[i]), std::sin(th.nodes[i]);
                    acc += th.weights[i] * f(w) * phase(w);
                }
            } else {
                const Rule th = gauss_legendre(n_polar, 0.0, pi);
                const Rule ph = periodic_trapezoid(n_angle, 2.0 * pi);
                Point w(3);
                for (std::size_t i = 0; i < th.size(); ++i)
                    for (std::size_t j = 0; j < ph.size(); ++j) {
                        const double st = std::sin(th.nodes[i]);
                        w << st * std::cos(ph.nodes[j]), st * std::sin(ph.nodes[j]), std::cos(th.nodes[i]);
                        acc += th.weights[i] * ph.weights[j] * st * f(w) * phase(w);
                    }
            }
            return acc;
        };
        const int n = 64 * ref + static_cast<int>(std::ceil(10.0 * X));
        if (static_cast<long long>(n) * n > kNodeBudget)
            throw std::domain_error("extension_transform: |x| beyond the resolvable range");
        const Complex coarse = run(n);
        const Complex fine = run(n + n / 2);
        return {fine, std::abs(fine - coarse)};
    }

    const int n = s.base_dim;
    const double mass = tail_bound(s, f.decay, 0.0);
    const double R = cutoff_radius(s, f.decay, 1e-3 * spec.tol * mass);
    const double tail = tail_bound(s, f.decay, R);
    const double rho = x.head(n).norm();
    const double t = x[n];
    // oscillation count across the truncated domain, ten nodes per oscillation
    const double oscill = (rho * R + std::abs(t) * s.height(R)) / (2.0 * pi);
    const int radial_nodes = 64 * ref + static_cast<int>(std::ceil(10.0 * oscill));
    const int panels = (radial_nodes + 7) / 8;

    if (f.is_radial()) {
        auto run = [&](int pan) {
            const Rule rr = composite_gauss(0.0, R, pan, 8);
            Complex acc{};
            for (std::size_t i = 0; i < rr.size(); ++i) {
                const double r = rr.nodes[i];
                double kernel;
                if (n == 2) {
                    kernel = 2.0 * pi * bessel_j(0, rho * r) * r;
                } else {
                    const double z = rho * r;
                    kernel = 4.0 * pi * (z < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z) * r * r;
                }
                acc += rr.weights[i] * f.radial(r) * s.radial_weight(r) * kernel * std::polar(1.0, -t * s.height(r));
            }
            return acc;
        };
        const Complex coarse = run(panels);
        const Complex fine = run(panels + panels / 2);
        return {fine, std::abs(fine - coarse) + tail};
    }

    const int angular = 64 * ref + static_cast<int>(std::ceil(10.0 * rho * R));
    long long total = static_cast<long long>(panels) * 8 * angular;
    if (n == 3) total *= angular / 2;
    if (total > kNodeBudget) throw std::domain_error("extension_transform: |x| beyond the resolvable range");
    auto run = [&](int pan, int ang) {
        const auto nodes = surface_rule(s, R, pan, 8, ang);
        const auto parts = parallel_map<Complex>(nodes.size(), [&](std::size_t i) {
            return nodes[i].weight * f(nodes[i].point) * phase(nodes[i].point);
        });
        Complex acc{};
        for (const auto& p : parts) acc += p;
        return acc;
    };
    const Complex coarse = run(panels, angular);
    const Complex fine = run(panels + panels / 2, angular + angular / 2);
    return {fine, std::abs(fine - coarse) + tail};
}

std::vector<Complex> radial_extension_grid(const TrialFunction& f, const std::vector<double>& rhos,
                                           const std::vector<double>& ts, const QuadratureSpec& spec) {
    const SurfaceMeasure& s = surface(f.surface);
    if (!f.is_radial() || s.base_dim != 2) throw std::invalid_argument("radial_extension_grid: radial 2-D trials only");
    const double R = trial_radius(f.decay, 1e-12);
    double rho_max = 0.0, t_max = 0.0;
    for (double r : rhos) rho_max = std::max(rho_max, r);
    for (double t : ts) t_max = std::max(t_max, std::abs(t));
    const double oscill = (rho_max * R + t_max * s.height(R)) / (2.0 * pi);
    const int nodes = 64 * std::max(1, spec.refine) + static_cast<int>(std::ceil(10.0 * oscill));
    const Rule rr = composite_gauss(0.0, R, (nodes + 7) / 8, 8);
    const std::size_t nr = rr.size();
    if (static_cast<long long>(nr) * rhos.size() > kNodeBudget)
        throw std::domain_error("radial_extension_grid: table too large");
    std::vector<double> amp(nr), height(nr);
    for (std::size_t j = 0; j < nr; ++j) {
        const double r = rr.nodes[j];
        amp[j] = 2.0 * pi * rr.weights[j] * f.radial(r) * s.radial_weight(r) * r;
        height[j] = s.height(r);
    }
    // Hankel table shared by every time slice
    std::vector<double> table(rhos.size() * nr);
    parallel_for(rhos.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < nr; ++j) table[i * nr + j] = amp[j] * bessel_j(0, rhos[i] * rr.nodes[j]);
    });
    std::vector<Complex> out(rhos.size() * ts.size());
    parallel_for(ts.size(), [&](std::size_t k) {
        std::vector<Complex> ph(nr);
        for (std::size_t j = 0; j < nr; ++j) ph[j] = std::polar(1.0, -ts[k] * height[j]);
        for (std::size_t i = 0; i < rhos.size(); ++i) {
            Complex acc{};
            const double* row = &table[i * nr];
            for (std::size_t j = 0; j < nr; ++j) acc += row[j] * ph[j];
            out[k * rhos.size() + i] = acc;
        }
    });
    return out;
}

namespace {

// G(rho) = h(|c + rho e|) + h(|c - rho e|) for a unit direction e, increasing in rho >= 0.
// Base points are padded to three components.
struct PairLevel {
    const SurfaceMeasure& s;
    Eigen::Vector3d c;
    Eigen::Vector3d e;

    [[nodiscard]] double value(double rho) const {
        return s.height((c + rho * e).norm()) + s.height((c - rho * e).norm());
    }
    [[nodiscard]] double slope(double rho) const {
        const Eigen::Vector3d a = c + rho * e, b = c - rho * e;
        const double na = a.norm(), nb = b.norm();
        double d = 0.0;
        if (na > 0.0) d += s.height_derivative(na) * a.dot(e) / na;
        if (nb > 0.0) d -= s.height_derivative(nb) * b.dot(e) / nb;
        return d;
    }
    // root of value(rho) = target on [0, hi]: bisection to a bracket, then safeguarded Newton
    [[nodiscard]] double solve(double target, double hi) const {
        double lo = 0.0;
        while (value(hi) < target) hi *= 2.0;
        while (hi - lo > 1e-4 * hi) {
            const double mid = 0.5 * (lo + hi);
            (value(mid) < target ? lo : hi) = mid;
        }
        double x = 0.5 * (lo + hi);
        for (int i = 0; i < 50; ++i) {
            const double r = value(x) - target;
            (r < 0.0 ? lo : hi) = x;
            const double d = slope(x);
            double nx = d > 0.0 ? x - r / d : 0.5 * (lo + hi);
            if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
            if (std::abs(nx - x) <= 1e-15 * std::max(1.0, x) || hi - lo <= 1e-15 * hi) return nx;
            x = nx;
        }
        return x;
    }
};

Eigen::Vector3d pad(const Eigen::VectorXd& v) {
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    out.head(v.size()) = v;
    return out;
}

void require_chain_input(const TrialFunction& f) {
    if (f.surface != SurfaceId::paraboloid2 && f.surface != SurfaceId::cone3 && f.surface != SurfaceId::hyperboloid2)
        throw std::invalid_argument("sharp_chain: surface must be paraboloid2, cone3 or hyperboloid2");
    if (!f.is_radial()) throw std::invalid_argument("sharp_chain: trial must be radial");
    const double R = trial_radius(f.decay, 1e-9);
    bool positive = false;
    for (int i = 0; i <= 2000; ++i) {
        const double v = f.radial(R * i / 2000.0);
        if (v < 0.0) throw std::invalid_argument("sharp_chain: trial changes sign; the chain needs f >= 0");
        positive = positive || v > 0.0;
    }
    if (!positive) throw std::invalid_argument("sharp_chain: trial vanishes identically");
}

}  // namespace

double trial_convolution(const TrialFunction& f, double X, double tau, int angular_nodes) {
    const SurfaceMeasure& s = surface(f.surface);
    if (s.id == SurfaceId::cone3) {
        if (tau < X) return 0.0;
        // bipolar coordinates: (2 pi / |xi|) int f(r) f(tau - r) dr over |2r - tau| <= |xi|
        const Rule& g = gauss_legendre(angular_nodes);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double r = 0.5 * tau + 0.5 * X * g.nodes[i];
            acc += g.weights[i] * f.radial(r) * f.radial(tau - r);
        }
        return pi * acc;
    }
    const Eigen::Vector3d c(0.5 * X, 0.0, 0.0);
    const double tmin = 2.0 * s.height(0.5 * X);
    if (tau <= tmin) return 0.0;
    const double hi = height_inverse(s, 0.5 * tau) + 1e-12;
    const Rule th = periodic_trapezoid(angular_nodes, 2.0 * pi, pi / angular_nodes);
    double acc = 0.0;
    for (std::size_t k = 0; k < th.size(); ++k) {
        const Eigen::Vector3d e(std::cos(th.nodes[k]), std::sin(th.nodes[k]), 0.0);
        const PairLevel lvl{s, c, e};
        const double rho = lvl.solve(tau, hi);
        const double a = (c + rho * e).norm(), b = (c - rho * e).norm();
        const double d = lvl.slope(rho);
        if (d <= 0.0) continue;
        acc += th.weights[k] * f.radial(a) * f.radial(b) * s.radial_weight(a) * s.radial_weight(b) * rho / d;
    }
    return acc;
}

namespace {

Estimate<double> l2_of_convolution(const TrialFunction& f, const QuadratureSpec& spec) {
    const SurfaceMeasure& s = surface(f.surface);
    const double Rf = trial_radius(f.decay, 1e-9);
    const int ref = std::max(1, spec.refine);
    auto run = [&](int level) {
        const int panels = 8 * level;
        const int ang = 32 * level;
        const Rule xr = composite_gauss(0.0, 2.0 * Rf, panels, 8);
        const auto parts = parallel_map<double>(xr.size(), [&](std::size_t i) {
            const double X = xr.nodes[i];
            double inner = 0.0;
            if (s.id == SurfaceId::cone3) {
                const double V = 2.0 * Rf - X;
                if (V <= 0.0) return 0.0;
                const Rule vr = composite_gauss(0.0, V, panels, 8);
                for (std::size_t j = 0; j < vr.size(); ++j) {
                    const double C = trial_convolution(f, X, X + vr.nodes[j], ang);
                    inner += vr.weights[j] * C * C;
                }
                return xr.weights[i] * 4.0 * pi * X * X * inner;
            }
            // tau = tau_min + v^2 keeps the integrand smooth at the support edge
            const double tmin = 2.0 * s.height(0.5 * X);
            const double tmax = 2.0 * s.height(Rf);
            if (tmax <= tmin) return 0.0;
            const Rule vr = composite_gauss(0.0, std::sqrt(tmax - tmin), panels, 8);
            for (std::size_t j = 0; j < vr.size(); ++j) {
                const double v = vr.nodes[j];
                const double C = trial_convolution(f, X, tmin + v * v, ang);
                inner += vr.weights[j] * 2.0 * v * C * C;
            }
            return xr.weights[i] * 2.0 * pi * X * inner;
        });
        double acc = 0.0;
        for (double p : parts) acc += p;
        return acc;
    };
    const double coarse = run(ref);
    const double fine = run(2 * ref);
    // pairs outside the truncation carry at most a 1e-9 fraction of the envelope
    return {fine, std::abs(fine - coarse) + 4e-9 * std::abs(fine)};
}

Estimate<double> l2_norm_sq(const TrialFunction& f, const QuadratureSpec& spec) {
    const SurfaceMeasure& s = surface(f.surface);
    SurfaceFunction<double> g = [&f](const Point& w) { return std::norm(f(w)); };
    return measure_integral(s, g, f.decay.squared(), spec);
}

}  // namespace

SharpChainReport sharp_chain(const TrialFunction& f, const QuadratureSpec& spec) {
    require_chain_input(f);
    const SurfaceMeasure& s = surface(f.surface);
    SharpChainReport rep;
    rep.sup = s.convolution_sup();
    rep.norm_sq = l2_norm_sq(f, spec);
    rep.l2_conv_sq = l2_of_convolution(f, spec);
    const double n2 = rep.norm_sq.value;
    rep.bound = {rep.sup * n2 * n2, rep.sup * 2.0 * n2 * rep.norm_sq.error};
    rep.defect = {rep.bound.value - rep.l2_conv_sq.value, rep.bound.error + rep.l2_conv_sq.error};
    return rep;
}

SequenceReport hyperboloid_sequence(const std::vector<double>& a_values, const QuadratureSpec& spec) {
    SequenceReport rep;
    rep.a = a_values;
    rep.ceiling = std::sqrt(surface(SurfaceId::hyperboloid2).convolution_sup());
    for (double a : a_values) {
        if (!(a >= 1.0)) throw std::invalid_argument("hyperboloid_sequence: a must be >= 1");
        const auto chain = sharp_chain(hyperboloid_trial(a), spec);
        const double l2 = chain.l2_conv_sq.value, n2 = chain.norm_sq.value;
        const double phi = std::sqrt(l2) / n2;
        const double err = phi * (0.5 * chain.l2_conv_sq.error / l2 + chain.norm_sq.error / n2);
        rep.phi.push_back({phi, err});
    }
    rep.increasing = true;
    rep.below_ceiling = true;
    for (std::size_t i = 0; i < rep.phi.size(); ++i) {
        if (!(rep.phi[i].value + rep.phi[i].error < rep.ceiling)) rep.below_ceiling = false;
        if (i > 0 && !(rep.phi[i].value - rep.phi[i].error > rep.phi[i - 1].value + rep.phi[i - 1].error))
            rep.increasing = false;
    }
    return rep;
}

PlancherelReport plancherel_ratio(const TrialFunction& f, const QuadratureSpec& spec) {
    if (f.surface != SurfaceId::paraboloid2 || !f.is_radial())
        throw std::invalid_argument("plancherel_ratio: radial paraboloid2 trials only");
    PlancherelReport rep;
    rep.l2_conv_sq = l2_of_convolution(f, spec);
    // parabolic scaling: time ~ 1/R^2 and space ~ 1/R; |E(x, t)| is carried by
    // |x| <= 2 |t| R_e, where f has fallen to 1e-3 of its peak
    const double R = trial_radius(f.decay, 1e-9);
    const double R_e = trial_radius(f.decay, 1e-3);
    const double T = 200.0 / (R * R);
    const double rho_max = 2.0 * (2.0 * T) * R_e + 2.0 * R_e;
    const int ref = std::max(1, spec.refine);
    const Rule rr = composite_gauss(0.0, rho_max, static_cast<int>(std::ceil(rho_max * R / 3.4)) * ref, 6);
    const int t_panels = 24 * ref;
    const Rule t1 = composite_gauss(0.0, T, t_panels, 6);
    const Rule t2 = composite_gauss(T, 2.0 * T, t_panels, 6);
    std::vector<double> ts = t1.nodes;
    ts.insert(ts.end(), t2.nodes.begin(), t2.nodes.end());
    const auto E = radial_extension_grid(f, rr.nodes, ts, spec);
    auto slab = [&](std::size_t from, const Rule& tr) {
        double acc = 0.0;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            double inner = 0.0;
            for (std::size_t i = 0; i < rr.size(); ++i) {
                const double m = std::norm(E[(from + k) * rr.size() + i]);
                inner += rr.weights[i] * rr.nodes[i] * m * m;
            }
            acc += tr.weights[k] * inner;
        }
        // both signs of t and the angular integral
        return 2.0 * 2.0 * pi * acc;
    };
    const double I_T = slab(0, t1);
    const double I_2T = I_T + slab(t1.size(), t2);
    // the time tail decays like 1/T
    const double extrap = 2.0 * I_2T - I_T;
    rep.l4_fourth = {extrap, std::abs(extrap - I_2T) * 0.25};
    rep.ratio = rep.l4_fourth.value / rep.l2_conv_sq.value;
    return rep;
}

double functional_equation_defect(const TrialFunction& f, const std::vector<BasePair>& samples) {
    const SurfaceMeasure& s = surface(f.surface);
    if (!is_graph(f.surface)) throw std::invalid_argument("functional_equation_defect: graph surfaces only");
    const int n = s.base_dim;
    auto value = [&](const Eigen::VectorXd& base) {
        const Complex v = f(s.lift(base));
        return v;
    };
    double worst = 0.0;
    for (const auto& [eta, zeta] : samples) {
        if (eta.size() != n || zeta.size() != n)
            throw std::invalid_argument("functional_equation_defect: sample has wrong dimension");
        const Complex fe = value(eta), fz = value(zeta);
        if (!(fe.real() > 0.0 && fz.real() > 0.0 && fe.imag() == 0.0 && fz.imag() == 0.0))
            throw std::domain_error("functional_equation_defect: trial must be positive on the samples");
        const Eigen::VectorXd c = 0.5 * (eta + zeta);
        const double target = s.height(eta.norm()) + s.height(zeta.norm());
        const double floor_level = 2.0 * s.height(c.norm());
        if (target - floor_level <= 1e-12 * std::max(1.0, target))
            throw std::domain_error("functional_equation_defect: sample admits no distinct matched pair");
        const double ref = (fe * fz).real();
        // fan of directions; in 3-D the fan is rotated about the sum direction
        std::vector<Eigen::VectorXd> dirs;
        if (n == 2) {
            for (int k = 0; k < 16; ++k) {
                Eigen::VectorXd e(2);
                e << std::cos(2.0 * pi * k / 16.0), std::sin(2.0 * pi * k / 16.0);
                dirs.push_back(e);
            }
        } else {
            Eigen::VectorXd a = c.norm() > 0.0 ? Eigen::VectorXd(c.normalized()) : Eigen::VectorXd::Unit(n, 0);
            Eigen::VectorXd b = Eigen::VectorXd::Unit(n, std::abs(a[0]) < 0.9 ? 0 : 1);
            b = (b - b.dot(a) * a).normalized();
            Eigen::Vector3d a3 = a, b3 = b;
            const Eigen::Vector3d c3 = a3.cross(b3);
            for (int k = 0; k < 16; ++k)
                for (int m = 0; m < 3; ++m) {
                    const double th = 2.0 * pi * k / 16.0, ph = 2.0 * pi * m / 3.0 + 0.1;
                    Eigen::VectorXd e(3);
                    e = std::cos(th) * a3 + std::sin(th) * (std::cos(ph) * b3 + std::sin(ph) * c3);
                    dirs.push_back(e);
                }
        }
        for (const auto& e : dirs) {
            const PairLevel lvl{s, pad(c), pad(e)};
            const double rho = lvl.solve(target, height_inverse(s, 0.5 * target) + 1e-9);
            const Eigen::VectorXd d = rho * e;
            const Complex v = value(c + d) * value(c - d);
            worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
        }
    }
    return worst;
}

}  // namespace strichlab
