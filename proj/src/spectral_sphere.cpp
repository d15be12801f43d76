#include "strichlab/spectral_sphere.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "strichlab/errors.hpp"
#include "strichlab/parallel.hpp"
#include "strichlab/special_fn.hpp"

namespace strichlab {

using std::numbers::pi;

int HarmonicExpansion::max_degree() const {
    int k = 0;
    for (const auto& t : terms) k = std::max(k, std::abs(t.degree));
    return k;
}

Complex HarmonicExpansion::operator()(double theta, double phi) const {
    Complex acc{};
    if (sphere_dim == 1) {
        const double norm = 1.0 / std::sqrt(2.0 * pi);
        for (const auto& t : terms) acc += t.coeff * norm * circular_harmonic(t.degree, theta);
        return acc;
    }
    const auto Y = real_spherical_harmonics(max_degree(), theta, phi);
    for (const auto& t : terms) acc += t.coeff * Y[static_cast<std::size_t>(t.degree * t.degree + t.degree + t.order)];
    return acc;
}

double HarmonicExpansion::component_norm_sq(int k) const {
    // repeated basis functions add their coefficients first
    std::map<std::pair<int, int>, Complex> merged;
    for (const auto& t : terms)
        if (std::abs(t.degree) == k) merged[{t.degree, sphere_dim == 1 ? 0 : t.order}] += t.coeff;
    double acc = 0.0;
    for (const auto& [key, c] : merged) acc += std::norm(c);
    return acc;
}

double magic_identity_check(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2, const Eigen::VectorXd& w3) {
    if (w1.size() != w2.size() || w1.size() != w3.size()) throw std::invalid_argument("magic_identity_check: dimension mismatch");
    for (const auto* w : {&w1, &w2, &w3})
        if (std::abs(w->norm() - 1.0) > 1e-12) throw std::invalid_argument("magic_identity_check: not a unit vector");
    if (std::abs((w1 + w2 + w3).norm() - 1.0) > 1e-12)
        throw std::invalid_argument("magic_identity_check: sum is not a unit vector");
    return (w1 + w2).squaredNorm() + (w2 + w3).squaredNorm() + (w3 + w1).squaredNorm() - 4.0;
}

std::vector<std::array<Eigen::VectorXd, 3>> random_constrained_triples(int dim, int count, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("random_constrained_triples: dim >= 2 required");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto unit = [&] {
        Eigen::VectorXd v(dim);
        do {
            for (int i = 0; i < dim; ++i) v[i] = normal(rng);
        } while (v.norm() < 1e-8);
        return Eigen::VectorXd(v.normalized());
    };
    std::vector<std::array<Eigen::VectorXd, 3>> out;
    while (static_cast<int>(out.size()) < count) {
        const Eigen::VectorXd w1 = unit(), w2 = unit();
        const Eigen::VectorXd s = w1 + w2;
        const double ns = s.norm();
        if (ns < 1e-6 || ns > 2.0 - 1e-6) continue;
        // w3 on the intersection of |w3| = 1 and |s + w3| = 1
        Eigen::VectorXd n = unit();
        n -= n.dot(s) / (ns * ns) * s;
        if (n.norm() < 1e-8) continue;
        n.normalize();
        Eigen::VectorXd w3 = -0.5 * s + std::sqrt(1.0 - 0.25 * ns * ns) * n;
        w3.normalize();
        out.push_back({w1, w2, w3});
    }
    return out;
}

int FunkHeckeSpectrum::sign(int k) const {
    const auto& l = lambda.at(static_cast<std::size_t>(k));
    if (std::abs(l.value) <= l.error) return 0;
    return l.value > 0.0 ? 1 : -1;
}

FunkHeckeSpectrum funk_hecke_spectrum(int dim, int kmax, const QuadratureSpec& spec) {
    if (dim < 3 || dim > 12) throw std::invalid_argument("funk_hecke_spectrum: dimension must lie in [3, 12]");
    if (kmax < 0 || kmax > 20) throw std::invalid_argument("funk_hecke_spectrum: kmax must lie in [0, 20]");
    FunkHeckeSpectrum out;
    out.dim = dim;
    out.kernel = "|w - v| |w + v|^(d-3)";
    const GegenbauerIndex base{0, 0.5 * (dim - 2)};
    const double V = sphere_volume(dim - 2);
    // t = cos u turns kernel and weight into 2 sin(u/2) (2 cos(u/2))^{d-3} sin^{d-2} u
    auto integrate = [&](int k, int n) {
        const Rule r = gauss_legendre(n, 0.0, pi);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double u = r.nodes[i];
            const double kern = 2.0 * std::sin(0.5 * u) * std::pow(2.0 * std::cos(0.5 * u), dim - 3);
            acc += r.weights[i] * kern * std::pow(std::sin(u), dim - 2) *
                   gegenbauer_normalized({k, base.parameter}, std::cos(u));
        }
        return V * acc;
    };
    const int n = (32 + 2 * kmax) * std::max(1, spec.refine);
    for (int k = 0; k <= kmax; ++k) {
        const double coarse = integrate(k, n);
        const double fine = integrate(k, 2 * n);
        const double scale = V * std::pow(2.0, dim - 2);
        out.lambda.push_back({fine, std::abs(fine - coarse) + 1e-14 * scale});
    }
    return out;
}

std::optional<int> reference_sign(int dim, int k) {
    if (k == 0) return 1;
    if (dim == 3) return -1;
    if (dim == 4) return k % 2 == 1 ? 0 : -1;
    if (dim <= 7) return k == 1 ? 1 : -1;
    if (k <= 2) return 1;
    return std::nullopt;
}

HFormResult h_form(const HarmonicExpansion& g, const QuadratureSpec& spec) {
    if (g.sphere_dim != 2) throw std::invalid_argument("h_form: expansion must live on S^2");
    const int K = g.max_degree();
    if (K > 20) throw std::invalid_argument("h_form: degree above 20");
    for (const auto& t : g.terms)
        if (t.degree < 0 || std::abs(t.order) > t.degree) throw std::invalid_argument("h_form: bad harmonic index");
    HFormResult out;
    const auto spectrum = funk_hecke_spectrum(3, K, spec);
    for (int k = 0; k <= K; ++k) out.diagonal += spectrum.lambda[static_cast<std::size_t>(k)].value * g.component_norm_sq(k);

    // direct quadrature; the inner sphere is charted around the outer point so
    // that |w - v| = 2 sin(alpha / 2) is smooth in the chart
    const int ref = std::max(1, spec.refine);
    const int n_outer = (K + 16) * ref;
    const int n_alpha = (2 * K + 24) * ref;
    const int n_beta = (2 * K + 8) * ref;
    const Rule th = gauss_legendre(n_outer, 0.0, pi);
    const Rule ph = periodic_trapezoid(2 * n_outer + 2, 2.0 * pi);
    const Rule al = gauss_legendre(n_alpha, 0.0, pi);
    const Rule be = periodic_trapezoid(n_beta, 2.0 * pi);
    const auto rows = parallel_map<Complex>(th.size(), [&](std::size_t i) {
        Complex row{};
        const double st = std::sin(th.nodes[i]), ct = std::cos(th.nodes[i]);
        for (std::size_t j = 0; j < ph.size(); ++j) {
            const double cp = std::cos(ph.nodes[j]), sp = std::sin(ph.nodes[j]);
            const Eigen::Vector3d w(st * cp, st * sp, ct);
            const Eigen::Vector3d e1(ct * cp, ct * sp, -st), e2(-sp, cp, 0.0);
            Complex inner{};
            for (std::size_t a = 0; a < al.size(); ++a) {
                const double ca = std::cos(al.nodes[a]), sa = std::sin(al.nodes[a]);
                const double kern = 2.0 * std::sin(0.5 * al.nodes[a]) * sa;
                for (std::size_t b = 0; b < be.size(); ++b) {
                    const Eigen::Vector3d v =
                        ca * w + sa * (std::cos(be.nodes[b]) * e1 + std::sin(be.nodes[b]) * e2);
                    const double vt = std::acos(std::clamp(v.z(), -1.0, 1.0));
                    const double vp = std::atan2(v.y(), v.x());
                    inner += al.weights[a] * be.weights[b] * kern * g(vt, vp);
                }
            }
            row += th.weights[i] * ph.weights[j] * st * std::conj(g(th.nodes[i], ph.nodes[j])) * inner;
        }
        return row;
    });
    Complex direct{};
    for (const auto& r : rows) direct += r;
    out.direct = direct.real();
    const double scale = std::max(std::abs(out.diagonal), 1e-300);
    out.relative_gap = std::abs(out.direct - out.diagonal) / scale;
    if (out.relative_gap > 1e-4 && std::abs(out.direct - out.diagonal) > 1e-12) {
        std::ostringstream msg;
        msg << "h_form: diagonal " << out.diagonal << " and direct " << out.direct << " disagree";
        throw NonConvergence(msg.str());
    }
    return out;
}

namespace {

// tanh-sinh nodes with negligible weight dropped
EndpointRule trimmed_tanh_sinh(double a, double b, int level) {
    EndpointRule full = tanh_sinh(a, b, level);
    EndpointRule r;
    r.lo = a;
    r.hi = b;
    const double floor = 1e-15 * (b - a);
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full.weights[i] < floor) continue;
        r.from_lo.push_back(full.from_lo[i]);
        r.from_hi.push_back(full.from_hi[i]);
        r.weights.push_back(full.weights[i]);
    }
    return r;
}

// Sum of F over the fiber {w4 + w5 + w6 = c} of the threefold circle
// convolution.  With |w5 + w6| = r, w = a + (top - a) sin^2 s removes the
// inverse square roots at both ends; each of the four branches carries
// 8 ds / (sqrt(r + a) * remaining factors).
Complex fiber_sum(const SigmaIntegrand& F, Hexad& w, const EndpointRule& srule) {
    const Complex c = -(w[0] + w[1] + w[2]);
    const double R = std::abs(c);
    if (R >= 3.0 || R == 0.0) return {};
    const Complex chat = c / R;
    const double a = std::abs(R - 1.0), b = R + 1.0, top = std::min(b, 2.0), L = top - a;
    Complex acc{};
    for (std::size_t i = 0; i < srule.size(); ++i) {
        const double sl = std::sin(srule.from_lo[i]), sh = std::sin(srule.from_hi[i]);
        const double r = a + L * sl * sl;
        const double top_minus_r = L * sh * sh;
        double rest;
        if (b <= 2.0) {
            rest = ((2.0 - top) + top_minus_r) * (2.0 + r) * (b + r);
        } else {
            rest = (2.0 + r) * ((b - top) + top_minus_r) * (b + r);
        }
        const double weight = 8.0 * srule.weights[i] / std::sqrt((r + a) * rest);
        if (!(weight > 0.0) || !std::isfinite(weight)) continue;
        const double cg = std::clamp((R * R + 1.0 - r * r) / (2.0 * R), -1.0, 1.0);
        const double sg = std::sqrt(std::max(0.0, 1.0 - cg * cg));
        const double half_chord = std::sqrt(std::max(0.0, 1.0 - 0.25 * r * r));
        for (int g = -1; g <= 1; g += 2) {
            w[3] = chat * Complex(cg, g * sg);
            const Complex v = c - w[3];
            const double nv = std::abs(v);
            const Complex vhat = nv > 0.0 ? v / nv : Complex(1.0, 0.0);
            for (int h = -1; h <= 1; h += 2) {
                w[4] = 0.5 * v + Complex(0.0, h * half_chord) * vhat;
                w[5] = v - w[4];
                acc += weight * F.eval(w);
            }
        }
    }
    return F.outer ? F.outer(w) * acc : acc;
}

Complex sigma_tensor(const SigmaIntegrand& F, int level) {
    const int n1 = 8 << level;
    const Rule t1 = periodic_trapezoid(n1, 2.0 * pi);
    // psi = theta2 - theta1; w1 + w2 = 0 at psi = pi
    const EndpointRule pa = trimmed_tanh_sinh(0.0, pi, level);
    const EndpointRule srule = trimmed_tanh_sinh(0.0, 0.5 * pi, level);
    struct Node {
        double theta1, psi, weight;
    };
    std::vector<Node> outer;
    for (std::size_t i = 0; i < t1.size(); ++i)
        for (std::size_t j = 0; j < pa.size(); ++j) {
            outer.push_back({t1.nodes[i], pa.from_lo[j], t1.weights[i] * pa.weights[j]});
            outer.push_back({t1.nodes[i], 2.0 * pi - pa.from_lo[j], t1.weights[i] * pa.weights[j]});
        }
    const auto parts = parallel_map<Complex>(outer.size(), [&](std::size_t k) {
        const Node& o = outer[k];
        Hexad w{};
        w[0] = std::polar(1.0, o.theta1);
        w[1] = std::polar(1.0, o.theta1 + o.psi);
        const Complex p = w[0] + w[1];
        const double np = std::abs(p);
        const double alpha = std::arg(p);
        // |w1 + w2 + w3| = 1 where cos(theta3 - alpha) = -|p| / 2
        const double beta = std::acos(std::clamp(-0.5 * np, -1.0, 1.0));
        Complex acc{};
        const double cuts[3][2] = {{alpha - beta, alpha + beta}, {alpha + beta, alpha + 2.0 * pi - beta}, {0, 0}};
        for (int piece = 0; piece < 2; ++piece) {
            const double lo = cuts[piece][0], hi = cuts[piece][1];
            if (hi - lo <= 0.0) continue;
            const EndpointRule t3 = trimmed_tanh_sinh(lo, hi, level);
            for (std::size_t m = 0; m < t3.size(); ++m) {
                w[2] = std::polar(1.0, lo + t3.from_lo[m]);
                acc += t3.weights[m] * fiber_sum(F, w, srule);
            }
        }
        return o.weight * acc;
    });
    Complex total{};
    for (const auto& p : parts) total += p;
    return total;
}

Estimate<Complex> sigma_monte_carlo(const SigmaIntegrand& F, const QuadratureSpec& spec) {
    if (spec.samples < 1000) throw std::invalid_argument("sigma_integrate: too few samples");
    const int chunks = 64;
    const std::int64_t per = (spec.samples + chunks - 1) / chunks;
    const EndpointRule srule = trimmed_tanh_sinh(0.0, 0.5 * pi, 3);
    struct Moments {
        Complex sum{};
        double sum_sq = 0.0;
    };
    const auto parts = parallel_map<Moments>(chunks, [&](std::size_t chunk) {
        std::seed_seq seq{static_cast<std::uint64_t>(spec.seed), static_cast<std::uint64_t>(chunk), std::uint64_t{6}};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
        Moments m;
        Hexad w{};
        for (std::int64_t i = 0; i < per; ++i) {
            for (int j = 0; j < 3; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, angle(rng));
            const Complex v = fiber_sum(F, w, srule);
            m.sum += v;
            m.sum_sq += std::norm(v);
        }
        return m;
    });
    Moments tot;
    for (const auto& p : parts) {
        tot.sum += p.sum;
        tot.sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(per) * chunks;
    const Complex mean = tot.sum / n;
    const double var = std::max(0.0, tot.sum_sq / n - std::norm(mean));
    const double vol = std::pow(2.0 * pi, 3);
    return {vol * mean, vol * 3.0 * std::sqrt(var / n)};
}

}  // namespace

Estimate<Complex> sigma_integrate(const SigmaIntegrand& F, const QuadratureSpec& spec, SigmaMode mode) {
    if (!F.eval) throw std::invalid_argument("sigma_integrate: empty integrand");
    if (mode == SigmaMode::monte_carlo) return sigma_monte_carlo(F, spec);
    const int level = 1 + std::max(0, spec.refine);
    const Complex coarse = sigma_tensor(F, level);
    const Complex fine = sigma_tensor(F, level + 1);
    return {fine, std::abs(fine - coarse) + 1e-12 * std::abs(fine)};
}

Estimate<double> t_form(const CircleFunction& h1, const CircleFunction& h2, const CircleFunction& h3,
                        const QuadratureSpec& spec, SigmaMode mode) {
    SigmaIntegrand F;
    F.eval = [](const Hexad& w) { return Complex(std::norm(w[3] + w[4] + w[5]) - 1.0, 0.0); };
    F.outer = [&](const Hexad& w) {
        return Complex(h1(std::arg(w[0])) * h2(std::arg(w[1])) * h3(std::arg(w[2])), 0.0);
    };
    const auto r = sigma_integrate(F, spec, mode);
    return {r.value.real(), r.error};
}

Step1Probe step1_probe(const CircleFunction& f, const QuadratureSpec& spec, SigmaMode mode) {
    for (int i = 0; i < 512; ++i) {
        const double th = 2.0 * pi * i / 512.0;
        const double v = f(th);
        if (v < 0.0) throw std::invalid_argument("step1_probe: f must be nonnegative");
        if (std::abs(v - f(th + pi)) > 1e-12 * std::max(1.0, std::abs(v)))
            throw std::invalid_argument("step1_probe: f must be antipodally symmetric");
    }
    SigmaIntegrand F;
    F.antipodal = true;
    F.eval = [&](const Hexad& w) {
        const double prod = f(std::arg(w[3])) * f(std::arg(w[4])) * f(std::arg(w[5]));
        return Complex(prod * (std::norm(w[3] + w[4] + w[5]) - 1.0), 0.0);
    };
    F.outer = [&](const Hexad& w) {
        return Complex(f(std::arg(w[0])) * f(std::arg(w[1])) * f(std::arg(w[2])), 0.0);
    };
    Step1Probe out;
    const auto lhs = sigma_integrate(F, spec, mode);
    out.lhs = {lhs.value.real(), lhs.error};
    const CircleFunction sq = [&](double th) {
        const double v = f(th);
        return v * v;
    };
    out.rhs = t_form(sq, sq, sq, spec, mode);
    out.gap = {out.rhs.value - out.lhs.value, out.rhs.error + out.lhs.error};
    return out;
}

double circle_mean(const CircleFunction& h) {
    // trapezoid with a refinement check; exact for trigonometric polynomials of low degree
    double prev = 0.0;
    for (int n = 256;; n *= 2) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += h(2.0 * pi * i / n);
        acc /= n;
        if (n > 256 && (std::abs(acc - prev) <= 1e-14 * std::max(1.0, std::abs(acc)) || n >= (1 << 20))) return acc;
        prev = acc;
    }
}

CircleFunction builtin_circle_function(const std::string& name) {
    if (name == "one") return [](double) { return 1.0; };
    if (name == "cos2") return [](double t) { return 1.0 + 0.5 * std::cos(2.0 * t); };
    if (name == "cos4") return [](double t) { return 1.0 + 0.3 * std::cos(4.0 * t); };
    if (name == "strong2") return [](double t) { return 1.0 + 0.9 * std::cos(2.0 * t); };
    if (name == "square_cos") return [](double t) { return std::cos(t) * std::cos(t); };
    if (name == "mixed") return [](double t) { return 1.0 + 0.5 * std::cos(2.0 * t) + 0.3 * std::sin(4.0 * t); };
    throw std::invalid_argument("unknown circle function '" + name + "'");
}

CircleFunction tabulated_circle_function(std::vector<double> theta, std::vector<double> v) {
    if (theta.size() < 2 || theta.size() != v.size())
        throw std::invalid_argument("tabulated circle function needs >= 2 samples");
    for (std::size_t i = 1; i < theta.size(); ++i)
        if (!(theta[i] > theta[i - 1])) throw std::invalid_argument("circle samples must increase in theta");
    if (theta.front() < 0.0 || theta.back() >= 2.0 * pi)
        throw std::invalid_argument("circle samples must lie in [0, 2 pi)");
    return [theta = std::move(theta), v = std::move(v)](double t) {
        t = std::fmod(t, 2.0 * pi);
        if (t < 0.0) t += 2.0 * pi;
        const auto it = std::upper_bound(theta.begin(), theta.end(), t);
        const std::size_t n = theta.size();
        std::size_t j = static_cast<std::size_t>(it - theta.begin());
        // neighbours across the wrap-around
        const std::size_t i0 = j == 0 ? n - 1 : j - 1;
        const std::size_t i1 = j == n ? 0 : j;
        double t0 = theta[i0], t1 = theta[i1];
        if (j == 0) t0 -= 2.0 * pi;
        if (j == n) t1 += 2.0 * pi;
        const double s = (t - t0) / (t1 - t0);
        return (1.0 - s) * v[i0] + s * v[i1];
    };
}

}  // namespace strichlab
