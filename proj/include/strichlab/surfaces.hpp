#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "strichlab/delta_geometry.hpp"
#include "strichlab/quadrature.hpp"

namespace strichlab {

enum class SurfaceId { paraboloid2, cone3, hyperboloid2, sphere1, sphere2, perturbed2 };

/// Stable CLI names: paraboloid2, cone3, hyperboloid2, sphere1, sphere2, perturbed2.
std::string to_string(SurfaceId id);
/// Throws std::invalid_argument for unknown names.
SurfaceId parse_surface(const std::string& name);
const std::vector<SurfaceId>& all_surfaces();

/// Catalog entry.  Graph surfaces are parametrized by xi in R^n and lifted to
/// (xi, h(|xi|)); spheres by polar angles (theta for S^1, (theta, phi) for S^2).
struct SurfaceMeasure {
    SurfaceId id;
    int base_dim;     // n
    int ambient_dim;  // n + 1 for graphs, n + 1 for spheres as well

    [[nodiscard]] bool is_sphere() const { return id == SurfaceId::sphere1 || id == SurfaceId::sphere2; }
    /// Height profile h(r) of a graph surface.
    [[nodiscard]] double height(double r) const;
    [[nodiscard]] double height_derivative(double r) const;
    /// Measure density relative to Lebesgue measure in xi, as a function of |xi|.
    [[nodiscard]] double radial_weight(double r) const;

    /// Surface point for a base parameter.
    [[nodiscard]] Point lift(const Point& base) const;
    /// Density of the measure relative to the base parameters.
    [[nodiscard]] double weight(const Point& base) const;
    /// Parameter box of the base domain; graphs are truncated at |xi_i| <= R.
    [[nodiscard]] Box base_domain(double R) const;
    /// sup of the two-fold convolution density (infinite for spheres).
    [[nodiscard]] double convolution_sup() const;
};

const SurfaceMeasure& surface(SurfaceId id);

/// Envelope class of an integrand on a noncompact surface, used to certify
/// truncation tails: |g(xi)| <= amplitude * envelope(|xi|).
struct DecayClass {
    enum class Kind { gaussian, exponential, hyperbolic_exponential, compact };
    Kind kind = Kind::gaussian;
    double rate = 1.0;  // s in e^{-s r^2}, e^{-s r}, a in e^{-a sqrt(1 + r^2)}, or support radius
    double amplitude = 1.0;

    static DecayClass gaussian(double s, double amp = 1.0) { return {Kind::gaussian, s, amp}; }
    static DecayClass exponential(double s, double amp = 1.0) { return {Kind::exponential, s, amp}; }
    static DecayClass hyperbolic_exponential(double a, double amp = 1.0) {
        return {Kind::hyperbolic_exponential, a, amp};
    }
    static DecayClass compact(double radius, double amp = 1.0) { return {Kind::compact, radius, amp}; }

    [[nodiscard]] double envelope(double r) const;
    /// Upper bound for int_R^inf envelope(r) r^power dr, power in {0, 1, 2}.
    [[nodiscard]] double tail_moment(double R, int power) const;
    /// Power of the envelope: the same class with doubled rate and squared amplitude.
    [[nodiscard]] DecayClass squared() const;
    [[nodiscard]] std::string describe() const;
};

/// Upper bound for int_{|xi| > R} |g| dmu on a graph surface.
double tail_bound(const SurfaceMeasure& s, const DecayClass& decay, double R);

/// Smallest radius (to 1%) whose tail bound is at most `budget`.
double cutoff_radius(const SurfaceMeasure& s, const DecayClass& decay, double budget);

/// Quadrature node on a surface: base parameter, lifted point, and the full
/// weight (measure density times base quadrature weight).
struct SurfaceNode {
    Point base;
    Point point;
    double weight;
};

/// Tensor rule over the (truncated) base domain.  Graph surfaces use polar or
/// spherical coordinates with `radial_panels` Gauss panels of `order` nodes in
/// |xi| and `angular` nodes per angle; spheres ignore R and radial settings.
std::vector<SurfaceNode> surface_rule(const SurfaceMeasure& s, double R, int radial_panels, int order,
                                      int angular);

template <typename Scalar>
using SurfaceFunction = std::function<Scalar(const Point&)>;

/// int g dmu with g a function of the surface point.  Noncompact surfaces are
/// truncated at spec.cutoff_radius (or an automatic radius from the decay
/// class); throws TailBoundExceeded when the certified tail exceeds
/// spec.tol relative to the envelope mass.
template <typename Scalar>
Estimate<Scalar> measure_integral(const SurfaceMeasure& s, const SurfaceFunction<Scalar>& g,
                                  const DecayClass& decay, const QuadratureSpec& spec);

/// True iff p = (xi, tau) (or xi for spheres) lies in the closed support of
/// mu * mu.
bool support_predicate(const SurfaceMeasure& s, const Point& p);

/// Lorentz boost with rapidity beta mixing xi_1 with the last coordinate.
Point boost(const Point& p, double beta);

}  // namespace strichlab
