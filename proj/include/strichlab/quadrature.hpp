#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace strichlab {

/// Knobs shared by every numerical routine in the library.
///
/// Zero-valued entries mean "pick automatically"; the routines document what
/// they choose.  All defaults are echoed into CLI output metadata.
struct QuadratureSpec {
    double eps0 = 0.0;          // initial mollifier width; 0 -> box size / 50
    int halvings = 3;           // eps sequence eps0 * 2^-j, j = 0..halvings
    int cells_across = 16;      // midpoint cells across the mollifier support (>= 8)
    int refine = 1;             // resolution multiplier for tensor rules
    std::int64_t samples = 2'000'000;  // Monte-Carlo sample count
    std::uint64_t seed = 20160501;
    double tol = 1e-6;          // target relative tolerance / tail budget
    double cutoff_radius = 0.0; // truncation radius for noncompact bases; 0 -> auto
    double exclusion = 0.05;    // distance kept from singular loci

    static QuadratureSpec defaults() { return {}; }
    static QuadratureSpec high_resolution() {
        QuadratureSpec s;
        s.refine = 2;
        s.cells_across = 24;
        s.samples = 8'000'000;
        s.tol = 1e-8;
        return s;
    }
};

/// A value together with an absolute error estimate.
template <typename Scalar>
struct Estimate {
    Scalar value{};
    double error = 0.0;
};

/// Nodes and weights of a one-dimensional rule on a fixed interval.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }

    template <typename F>
    auto integrate(F&& f) const -> decltype(f(0.0)) {
        decltype(f(0.0)) acc{};
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Rule whose nodes are stored as distances to both endpoints, so that
/// integrands singular at an endpoint can be evaluated without cancellation.
struct EndpointRule {
    double lo = 0.0, hi = 0.0;
    std::vector<double> from_lo;
    std::vector<double> from_hi;
    std::vector<double> weights;
    [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]; cached, thread safe.
const Rule& gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// `panels` equal panels on [a, b], each with an `order`-point Gauss rule.
Rule composite_gauss(double a, double b, int panels, int order);

/// Equally weighted nodes k * period / n + shift; spectrally accurate for
/// smooth periodic integrands.
Rule periodic_trapezoid(int n, double period, double shift = 0.0);

/// Double-exponential (tanh-sinh) rule on [a, b] with step 2^-level; handles
/// integrable algebraic and logarithmic endpoint singularities.
EndpointRule tanh_sinh(double a, double b, int level);

}  // namespace strichlab
