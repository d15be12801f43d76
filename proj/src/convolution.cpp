#include "strichlab/convolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "strichlab/errors.hpp"
#include "strichlab/parallel.hpp"
#include "strichlab/special_fn.hpp"

namespace strichlab {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {

double spatial_norm(const SurfaceMeasure& s, const Point& p) {
    return s.is_sphere() ? p.norm() : p.head(s.base_dim).norm();
}

// inverse of the height profile on [0, inf); 0 for values below h(0)
double height_inverse(const SurfaceMeasure& s, double t) {
    switch (s.id) {
        case SurfaceId::paraboloid2: return t > 0.0 ? std::sqrt(t) : 0.0;
        case SurfaceId::cone3: return std::max(t, 0.0);
        case SurfaceId::hyperboloid2: return t > 1.0 ? std::sqrt(t * t - 1.0) : 0.0;
        case SurfaceId::perturbed2: return t > 0.0 ? std::sqrt(0.5 * (std::sqrt(1.0 + 4.0 * t) - 1.0)) : 0.0;
        default: throw std::logic_error("height_inverse: not a graph surface");
    }
}

double support_edge(const SurfaceMeasure& s, double xi) {
    switch (s.id) {
        case SurfaceId::paraboloid2: return xi * xi / 2.0;
        case SurfaceId::cone3: return xi;
        case SurfaceId::hyperboloid2: return std::sqrt(4.0 + xi * xi);
        case SurfaceId::perturbed2: return xi * xi / 2.0 + xi * xi * xi * xi / 8.0;
        default: return 0.0;
    }
}

void require_dim(const SurfaceMeasure& s, const Point& p) {
    const int want = s.is_sphere() ? s.base_dim + 1 : s.base_dim + 1;
    if (p.size() != want) throw std::invalid_argument("convolution: point has wrong dimension");
}

}  // namespace

double conv2_closed(const SurfaceMeasure& s, const Point& p) {
    require_dim(s, p);
    const double r = spatial_norm(s, p);
    if (s.is_sphere()) {
        if (r > 2.0) return 0.0;
        if (r == 0.0) return kInf;
        const int d = s.ambient_dim;
        if (d == 2 && r == 2.0) return kInf;
        return sphere_volume(d - 2) / r * std::pow(1.0 - r * r / 4.0, 0.5 * (d - 3));
    }
    const double tau = p[s.base_dim];
    if (!support_predicate(s, p)) return 0.0;
    switch (s.id) {
        case SurfaceId::paraboloid2: return pi / 2.0;
        case SurfaceId::cone3: return 2.0 * pi;
        case SurfaceId::hyperboloid2: return 2.0 * pi / std::sqrt(tau * tau - r * r);
        default: throw std::invalid_argument("conv2_closed: no closed form for " + to_string(s.id));
    }
}

double singular_gap(const SurfaceMeasure& s, const Point& p) {
    require_dim(s, p);
    const double r = spatial_norm(s, p);
    if (s.is_sphere()) return std::min(r, std::abs(2.0 - r));
    return std::abs(p[s.base_dim] - support_edge(s, r));
}

Estimate<double> conv2_oracle(const SurfaceMeasure& s, const Point& p, const QuadratureSpec& spec) {
    const double gap = singular_gap(s, p);
    if (gap < spec.exclusion) {
        std::ostringstream msg;
        msg << "conv2_oracle: point within " << gap << " of a singular locus or support edge";
        throw SingularProximity(msg.str());
    }
    const double r = spatial_norm(s, p);
    QuadratureSpec q = spec;
    // the mollification window must not reach the support edge
    const double window = spec.eps0 > 0.0 ? spec.eps0 : 2.0 * pi / 50.0;
    q.eps0 = std::min(window, 0.5 * gap);

    ImplicitMap f;
    TestFunction phi;
    Box box;
    if (s.is_sphere()) {
        // int delta(|xi - omega| - 1) dsigma(omega) with xi on the last axis
        auto dist = [r](double th) { return std::sqrt(std::max(0.0, r * r + 1.0 - 2.0 * r * std::cos(th))); };
        if (s.id == SurfaceId::sphere1) {
            box = {Axis{0.0, 2.0 * pi, true}};
            phi = [](const Point&) { return 1.0; };
        } else {
            box = {Axis{0.0, pi}, Axis{0.0, 2.0 * pi, true, 1}};
            phi = [](const Point& x) { return std::sin(x[0]); };
        }
        f = scalar_map(static_cast<int>(box.size()), [dist](const Point& x) { return dist(x[0]) - 1.0; });
        const auto res = delta_integral(f, phi, box, q);
        return {res.value, res.error};
    }

    const double tau = p[s.base_dim];
    const double rho_max = 1.01 * height_inverse(s, 0.5 * (tau + 1.01 * q.eps0)) + 1e-3;
    const SurfaceMeasure* sp = &s;
    if (s.base_dim == 2) {
        // eta = xi/2 + u, u = rho (cos a, sin a); zeta = xi/2 - u
        const Eigen::Vector2d half = 0.5 * p.head(2);
        auto parts = [half](const Point& x) {
            const Eigen::Vector2d u(x[0] * std::cos(x[1]), x[0] * std::sin(x[1]));
            return std::pair<double, double>{(half + u).norm(), (half - u).norm()};
        };
        f = scalar_map(2, [sp, tau, parts](const Point& x) {
            const auto [a, b] = parts(x);
            return tau - sp->height(a) - sp->height(b);
        });
        phi = [sp, parts](const Point& x) {
            const auto [a, b] = parts(x);
            return x[0] * sp->radial_weight(a) * sp->radial_weight(b);
        };
        box = {Axis{0.0, std::max(rho_max, 0.1)}, Axis{0.0, 2.0 * pi, true}};
    } else {
        // cone3: spheroidal level sets about the xi axis; azimuth integrated exactly
        auto parts = [r](const Point& x) {
            const double base = r * r / 4.0 + x[0] * x[0];
            const double cross = x[0] * r * std::cos(x[1]);
            return std::pair<double, double>{std::sqrt(std::max(0.0, base + cross)),
                                             std::sqrt(std::max(0.0, base - cross))};
        };
        f = scalar_map(3, [tau, parts](const Point& x) {
            const auto [a, b] = parts(x);
            return tau - a - b;
        });
        phi = [parts](const Point& x) {
            const auto [a, b] = parts(x);
            return x[0] * x[0] * std::sin(x[1]) / (a * b);
        };
        box = {Axis{0.0, std::max(rho_max, 0.1)}, Axis{0.0, pi}, Axis{0.0, 2.0 * pi, true, 1}};
    }
    const auto res = delta_integral(f, phi, box, q);
    return {res.value, res.error};
}

double conv3_sphere2(double r) {
    if (r < 0.0) throw std::domain_error("conv3_sphere2: negative radius");
    if (r <= 1.0) return 8.0 * pi * pi;
    if (r <= 3.0) return 4.0 * pi * pi * (-1.0 + 3.0 / r);
    return 0.0;
}

CircleConvolution conv3_circle(double r, const QuadratureSpec& spec) {
    if (r < 0.0) throw std::domain_error("conv3_circle: negative radius");
    CircleConvolution out;
    out.near_singular = std::abs(r - 1.0) < spec.exclusion;
    if (r >= 3.0) return out;
    if (r == 1.0) {
        out.value = kInf;
        return out;
    }
    // 16 int_a^c dw / (sqrt(4 - w^2) sqrt(w^2 - a^2) sqrt(b^2 - w^2)) with
    // w = a + (c - a) sin^2 s removing both inverse square roots
    const double a = std::abs(r - 1.0), b = r + 1.0, c = std::min(b, 2.0), L = c - a;
    auto integrate = [&](int level) {
        const EndpointRule rule = tanh_sinh(0.0, pi / 2.0, level);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double sl = std::sin(rule.from_lo[i]), sh = std::sin(rule.from_hi[i]);
            const double w = a + L * sl * sl;
            const double c_minus_w = L * sh * sh;
            double v;
            if (r < 1.0) {
                // c = b: the remaining factors are sqrt(4 - w^2), sqrt(w + a), sqrt(b + w)
                const double four = ((2.0 - c) + c_minus_w) * (2.0 + w);
                v = 1.0 / std::sqrt(four * (w + a) * (b + w));
            } else {
                // c = 2: the remaining factors are sqrt(2 + w), sqrt(w + a), sqrt(b^2 - w^2)
                const double outer = ((b - c) + c_minus_w) * (b + w);
                v = 1.0 / std::sqrt((2.0 + w) * (w + a) * outer);
            }
            acc += rule.weights[i] * v;
        }
        return 32.0 * acc;
    };
    const int level = 6 + std::max(0, spec.refine - 1);
    const double coarse = integrate(level);
    out.value = integrate(level + 1);
    out.error = std::abs(out.value - coarse) + 1e-14 * out.value;
    return out;
}

Estimate<double> conv3_monte_carlo(int dim, double r, double eps, const QuadratureSpec& spec) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("conv3_monte_carlo: dimension must be 2 or 3");
    if (spec.samples < 1000) throw std::invalid_argument("conv3_monte_carlo: too few samples");
    const int chunks = 64;
    const std::int64_t per = (spec.samples + chunks - 1) / chunks;
    struct Moments {
        double sum = 0.0, sum_sq = 0.0;
        std::int64_t n = 0;
    };
    const auto parts = parallel_map<Moments>(chunks, [&](std::size_t chunk) {
        std::seed_seq seq{static_cast<std::uint64_t>(spec.seed), static_cast<std::uint64_t>(chunk)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
        auto sample = [&](double* w) {
            if (dim == 2) {
                const double t = angle(rng);
                w[0] = std::cos(t);
                w[1] = std::sin(t);
                w[2] = 0.0;
            } else {
                double n2 = 0.0;
                do {
                    for (int k = 0; k < 3; ++k) w[k] = normal(rng);
                    n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
                } while (n2 < 1e-20);
                const double inv = 1.0 / std::sqrt(n2);
                for (int k = 0; k < 3; ++k) w[k] *= inv;
            }
        };
        Moments m;
        double w1[3], w2[3];
        for (std::int64_t i = 0; i < per; ++i) {
            sample(w1);
            sample(w2);
            const double vx = r - w1[0] - w2[0], vy = -w1[1] - w2[1], vz = -w1[2] - w2[2];
            const double g = bump(BumpProfile::polynomial, (std::sqrt(vx * vx + vy * vy + vz * vz) - 1.0) / eps) / eps;
            m.sum += g;
            m.sum_sq += g * g;
            ++m.n;
        }
        return m;
    });
    Moments tot;
    for (const auto& m : parts) {
        tot.sum += m.sum;
        tot.sum_sq += m.sum_sq;
        tot.n += m.n;
    }
    const double area = sphere_volume(dim - 1);
    const double mean = tot.sum / tot.n;
    const double var = std::max(0.0, tot.sum_sq / tot.n - mean * mean);
    return {area * area * mean, 3.0 * area * area * std::sqrt(var / tot.n)};
}

ConvolutionProfile convolution_profile(SurfaceId id, int fold, const QuadratureSpec& spec) {
    const SurfaceMeasure& s = surface(id);
    ConvolutionProfile prof{id, fold, {}, {}, {}};
    if (fold == 2) {
        if (id == SurfaceId::perturbed2) {
            prof.eval = [&s, spec](const Point& p) { return conv2_oracle(s, p, spec).value; };
        } else {
            prof.eval = [&s](const Point& p) { return conv2_closed(s, p); };
        }
        switch (id) {
            case SurfaceId::paraboloid2: prof.support = "2 tau >= |xi|^2"; break;
            case SurfaceId::cone3: prof.support = "tau >= |xi|"; break;
            case SurfaceId::hyperboloid2: prof.support = "tau >= sqrt(4 + |xi|^2)"; break;
            case SurfaceId::perturbed2: prof.support = "tau >= |xi|^2/2 + |xi|^4/8"; break;
            default: prof.support = "|xi| <= 2"; break;
        }
        if (id == SurfaceId::sphere1) prof.singular_locus = "xi = 0 and |xi| = 2";
        else if (id == SurfaceId::sphere2) prof.singular_locus = "xi = 0";
        else prof.singular_locus = "none";
        return prof;
    }
    if (fold == 3 && id == SurfaceId::sphere2) {
        prof.eval = [](const Point& p) { return conv3_sphere2(p.norm()); };
        prof.support = "|xi| < 3";
        prof.singular_locus = "none";
        return prof;
    }
    if (fold == 3 && id == SurfaceId::sphere1) {
        prof.eval = [spec](const Point& p) { return conv3_circle(p.norm(), spec).value; };
        prof.support = "|xi| < 3";
        prof.singular_locus = "|xi| = 1";
        return prof;
    }
    throw std::invalid_argument("convolution_profile: unsupported fold for " + to_string(id));
}

ComparisonResult comparison_check(const Eigen::Vector2d& xi, double tau, const QuadratureSpec& spec) {
    if (!(tau > 0.0)) throw std::invalid_argument("comparison_check: tau must be positive");
    const double x2 = xi.squaredNorm();
    Point p(3);
    p << xi[0], xi[1], x2 / 2.0 + x2 * x2 / 8.0 + tau;
    const auto lhs = conv2_oracle(surface(SurfaceId::perturbed2), p, spec);
    ComparisonResult out;
    out.lhs = lhs.value;
    out.rhs = pi / 2.0;
    out.error = lhs.error;
    out.strict = out.lhs < out.rhs - out.error;
    return out;
}

}  // namespace strichlab
