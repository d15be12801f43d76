#include "strichlab/surfaces.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "strichlab/errors.hpp"
#include "strichlab/special_fn.hpp"

namespace strichlab {

using std::numbers::pi;

std::string to_string(SurfaceId id) {
    switch (id) {
        case SurfaceId::paraboloid2: return "paraboloid2";
        case SurfaceId::cone3: return "cone3";
        case SurfaceId::hyperboloid2: return "hyperboloid2";
        case SurfaceId::sphere1: return "sphere1";
        case SurfaceId::sphere2: return "sphere2";
        case SurfaceId::perturbed2: return "perturbed2";
    }
    return "unknown";
}

const std::vector<SurfaceId>& all_surfaces() {
    static const std::vector<SurfaceId> ids = {SurfaceId::paraboloid2, SurfaceId::cone3,
                                               SurfaceId::hyperboloid2, SurfaceId::sphere1,
                                               SurfaceId::sphere2,      SurfaceId::perturbed2};
    return ids;
}

SurfaceId parse_surface(const std::string& name) {
    for (SurfaceId id : all_surfaces())
        if (to_string(id) == name) return id;
    throw std::invalid_argument("unknown surface '" + name + "'");
}

const SurfaceMeasure& surface(SurfaceId id) {
    static const SurfaceMeasure catalog[] = {
        {SurfaceId::paraboloid2, 2, 3}, {SurfaceId::cone3, 3, 4},   {SurfaceId::hyperboloid2, 2, 3},
        {SurfaceId::sphere1, 1, 2},     {SurfaceId::sphere2, 2, 3}, {SurfaceId::perturbed2, 2, 3},
    };
    return catalog[static_cast<int>(id)];
}

double SurfaceMeasure::height(double r) const {
    switch (id) {
        case SurfaceId::paraboloid2: return r * r;
        case SurfaceId::cone3: return r;
        case SurfaceId::hyperboloid2: return std::sqrt(1.0 + r * r);
        case SurfaceId::perturbed2: return r * r + r * r * r * r;
        default: throw std::logic_error("height: spheres are not graphs");
    }
}

double SurfaceMeasure::height_derivative(double r) const {
    switch (id) {
        case SurfaceId::paraboloid2: return 2.0 * r;
        case SurfaceId::cone3: return 1.0;
        case SurfaceId::hyperboloid2: return r / std::sqrt(1.0 + r * r);
        case SurfaceId::perturbed2: return 2.0 * r + 4.0 * r * r * r;
        default: throw std::logic_error("height_derivative: spheres are not graphs");
    }
}

double SurfaceMeasure::radial_weight(double r) const {
    switch (id) {
        case SurfaceId::cone3: return 1.0 / r;
        case SurfaceId::hyperboloid2: return 1.0 / std::sqrt(1.0 + r * r);
        case SurfaceId::paraboloid2:
        case SurfaceId::perturbed2: return 1.0;
        default: throw std::logic_error("radial_weight: spheres are not graphs");
    }
}

Point SurfaceMeasure::lift(const Point& base) const {
    Point p(ambient_dim);
    if (id == SurfaceId::sphere1) {
        p << std::cos(base[0]), std::sin(base[0]);
    } else if (id == SurfaceId::sphere2) {
        const double s = std::sin(base[0]);
        p << s * std::cos(base[1]), s * std::sin(base[1]), std::cos(base[0]);
    } else {
        p.head(base_dim) = base;
        p[base_dim] = height(base.norm());
    }
    return p;
}

double SurfaceMeasure::weight(const Point& base) const {
    if (id == SurfaceId::sphere1) return 1.0;
    if (id == SurfaceId::sphere2) return std::sin(base[0]);
    return radial_weight(base.norm());
}

Box SurfaceMeasure::base_domain(double R) const {
    if (id == SurfaceId::sphere1) return {Axis{0.0, 2.0 * pi, true}};
    if (id == SurfaceId::sphere2) return {Axis{0.0, pi}, Axis{0.0, 2.0 * pi, true}};
    return Box(base_dim, Axis{-R, R});
}

double SurfaceMeasure::convolution_sup() const {
    switch (id) {
        case SurfaceId::paraboloid2:
        case SurfaceId::perturbed2: return pi / 2.0;
        case SurfaceId::cone3: return 2.0 * pi;
        case SurfaceId::hyperboloid2: return pi;
        default: return std::numeric_limits<double>::infinity();
    }
}

double DecayClass::envelope(double r) const {
    switch (kind) {
        case Kind::gaussian: return std::exp(-rate * r * r);
        case Kind::exponential: return std::exp(-rate * r);
        case Kind::hyperbolic_exponential: return std::exp(-rate * std::sqrt(1.0 + r * r));
        case Kind::compact: return r <= rate ? 1.0 : 0.0;
    }
    return 0.0;
}

double DecayClass::tail_moment(double R, int power) const {
    if (power < 0 || power > 2) throw std::invalid_argument("tail_moment: power must be 0, 1 or 2");
    const double s = rate;
    switch (kind) {
        case Kind::gaussian: {
            const double e = std::exp(-s * R * R);
            const double erfc_term = std::sqrt(pi) * std::erfc(std::sqrt(s) * R);
            if (power == 0) return erfc_term / (2.0 * std::sqrt(s));
            if (power == 1) return e / (2.0 * s);
            return R * e / (2.0 * s) + erfc_term / (4.0 * s * std::sqrt(s));
        }
        case Kind::hyperbolic_exponential: {
            // sqrt(1 + r^2) lies above its tangent at R1 = max(R, 1)
            const double R1 = std::max(R, 1.0);
            const double q = std::sqrt(1.0 + R1 * R1);
            const double k = s * R1 / q;
            double far = std::exp(-s * q);
            if (power == 0) far /= k;
            if (power == 1) far *= R1 / k + 1.0 / (k * k);
            if (power == 2) far *= R1 * R1 / k + 2.0 * R1 / (k * k) + 2.0 / (k * k * k);
            const double near = R < 1.0 ? (1.0 - R) * std::exp(-s * std::sqrt(1.0 + R * R)) : 0.0;
            return near + far;
        }
        case Kind::exponential: {
            const double e = std::exp(-s * R);
            if (power == 0) return e / s;
            if (power == 1) return e * (s * R + 1.0) / (s * s);
            return e * (s * s * R * R + 2.0 * s * R + 2.0) / (s * s * s);
        }
        case Kind::compact:
            return R >= rate ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

DecayClass DecayClass::squared() const {
    DecayClass d = *this;
    if (kind != Kind::compact) d.rate *= 2.0;
    d.amplitude *= amplitude;
    return d;
}

std::string DecayClass::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::gaussian: os << "gaussian(" << rate << ")"; break;
        case Kind::exponential: os << "exponential(" << rate << ")"; break;
        case Kind::hyperbolic_exponential: os << "hyperbolic_exponential(" << rate << ")"; break;
        case Kind::compact: os << "compact(" << rate << ")"; break;
    }
    return os.str();
}

namespace {

// power p such that the tail integrand is bounded by envelope(r) r^p
int tail_power(const SurfaceMeasure& s) {
    switch (s.id) {
        case SurfaceId::paraboloid2:
        case SurfaceId::perturbed2: return 1;       // r dr
        case SurfaceId::hyperboloid2: return 0;     // r dr / sqrt(1 + r^2) <= dr
        case SurfaceId::cone3: return 1;            // r^2 dr / r
        default: return 0;
    }
}

}  // namespace

double tail_bound(const SurfaceMeasure& s, const DecayClass& decay, double R) {
    if (s.is_sphere()) return 0.0;
    return decay.amplitude * sphere_volume(s.base_dim - 1) * decay.tail_moment(R, tail_power(s));
}

double cutoff_radius(const SurfaceMeasure& s, const DecayClass& decay, double budget) {
    if (decay.kind == DecayClass::Kind::compact) return decay.rate;
    double hi = 1.0;
    while (tail_bound(s, decay, hi) > budget) {
        hi *= 2.0;
        if (hi > 1e6) throw TailBoundExceeded("cutoff_radius: no radius meets the tail budget");
    }
    double lo = 0.0;
    while (hi - lo > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        (tail_bound(s, decay, mid) > budget ? lo : hi) = mid;
    }
    return hi;
}

std::vector<SurfaceNode> surface_rule(const SurfaceMeasure& s, double R, int radial_panels, int order,
                                      int angular) {
    std::vector<SurfaceNode> nodes;
    auto push = [&](const Point& base, double w) {
        nodes.push_back({base, s.lift(base), w * s.weight(base)});
    };
    if (s.id == SurfaceId::sphere1) {
        const Rule th = periodic_trapezoid(angular, 2.0 * pi);
        Point b(1);
        for (std::size_t i = 0; i < th.size(); ++i) {
            b[0] = th.nodes[i];
            push(b, th.weights[i]);
        }
        return nodes;
    }
    if (s.id == SurfaceId::sphere2) {
        const Rule th = gauss_legendre(std::max(2, angular / 2), 0.0, pi);
        const Rule ph = periodic_trapezoid(angular, 2.0 * pi);
        Point b(2);
        for (std::size_t i = 0; i < th.size(); ++i)
            for (std::size_t j = 0; j < ph.size(); ++j) {
                b << th.nodes[i], ph.nodes[j];
                push(b, th.weights[i] * ph.weights[j]);
            }
        return nodes;
    }
    const Rule rr = composite_gauss(0.0, R, radial_panels, order);
    if (s.base_dim == 2) {
        const Rule th = periodic_trapezoid(angular, 2.0 * pi);
        Point b(2);
        for (std::size_t i = 0; i < rr.size(); ++i)
            for (std::size_t j = 0; j < th.size(); ++j) {
                const double r = rr.nodes[i];
                b << r * std::cos(th.nodes[j]), r * std::sin(th.nodes[j]);
                push(b, rr.weights[i] * th.weights[j] * r);
            }
        return nodes;
    }
    const Rule th = gauss_legendre(std::max(2, angular / 2), 0.0, pi);
    const Rule ph = periodic_trapezoid(angular, 2.0 * pi);
    Point b(3);
    for (std::size_t i = 0; i < rr.size(); ++i)
        for (std::size_t j = 0; j < th.size(); ++j)
            for (std::size_t k = 0; k < ph.size(); ++k) {
                const double r = rr.nodes[i], st = std::sin(th.nodes[j]);
                b << r * st * std::cos(ph.nodes[k]), r * st * std::sin(ph.nodes[k]), r * std::cos(th.nodes[j]);
                push(b, rr.weights[i] * th.weights[j] * ph.weights[k] * r * r * st);
            }
    return nodes;
}

template <typename Scalar>
Estimate<Scalar> measure_integral(const SurfaceMeasure& s, const SurfaceFunction<Scalar>& g,
                                  const DecayClass& decay, const QuadratureSpec& spec) {
    const int ref = std::max(1, spec.refine);
    double R = 0.0, tail = 0.0;
    if (!s.is_sphere()) {
        const double mass = tail_bound(s, decay, 0.0);
        const double budget = spec.tol * mass;
        if (spec.cutoff_radius > 0.0) {
            R = spec.cutoff_radius;
            tail = tail_bound(s, decay, R);
            if (tail > budget) {
                std::ostringstream msg;
                msg << "measure_integral: tail bound " << tail << " at R=" << R << " exceeds " << budget;
                throw TailBoundExceeded(msg.str());
            }
        } else {
            // the envelope mass can exceed the integral by orders of magnitude
            R = cutoff_radius(s, decay, 1e-3 * budget);
            tail = tail_bound(s, decay, R);
        }
    }
    auto run = [&](int level) {
        const auto nodes = surface_rule(s, R, 12 * level, 8, 48 * level);
        Scalar acc{};
        for (const auto& n : nodes) acc += n.weight * g(n.point);
        return acc;
    };
    const Scalar coarse = run(ref);
    const Scalar fine = run(2 * ref);
    return {fine, std::abs(fine - coarse) + tail};
}

template Estimate<double> measure_integral<double>(const SurfaceMeasure&, const SurfaceFunction<double>&,
                                                   const DecayClass&, const QuadratureSpec&);
template Estimate<std::complex<double>> measure_integral<std::complex<double>>(
    const SurfaceMeasure&, const SurfaceFunction<std::complex<double>>&, const DecayClass&, const QuadratureSpec&);

bool support_predicate(const SurfaceMeasure& s, const Point& p) {
    if (p.size() != s.ambient_dim) throw std::invalid_argument("support_predicate: dimension mismatch");
    if (s.is_sphere()) return p.norm() <= 2.0;
    const double xi = p.head(s.base_dim).norm();
    const double tau = p[s.base_dim];
    switch (s.id) {
        case SurfaceId::paraboloid2: return 2.0 * tau >= xi * xi;
        case SurfaceId::cone3: return tau >= xi;
        case SurfaceId::hyperboloid2: return tau >= std::sqrt(4.0 + xi * xi);
        case SurfaceId::perturbed2: return tau >= xi * xi / 2.0 + xi * xi * xi * xi / 8.0;
        default: return false;
    }
}

Point boost(const Point& p, double beta) {
    Point q = p;
    const Eigen::Index t = p.size() - 1;
    q[0] = std::cosh(beta) * p[0] + std::sinh(beta) * p[t];
    q[t] = std::sinh(beta) * p[0] + std::cosh(beta) * p[t];
    return q;
}

}  // namespace strichlab
