#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "strichlab/quadrature.hpp"
#include "strichlab/surfaces.hpp"

namespace strichlab {

using Complex = std::complex<double>;

/// A density on a catalog surface.  The profile takes the surface point
/// (the lifted base point for graphs, the unit vector for spheres).  Radial
/// trials also carry their profile as a function of |xi|, which enables the
/// one-dimensional fast paths.
struct TrialFunction {
    SurfaceId surface = SurfaceId::paraboloid2;
    std::string name;
    std::function<Complex(const Point&)> profile;
    DecayClass decay;
    std::function<double(double)> radial;  // empty unless f(xi) = radial(|xi|)

    [[nodiscard]] bool is_radial() const { return static_cast<bool>(radial); }
    [[nodiscard]] Complex operator()(const Point& surface_point) const { return profile(surface_point); }
};

/// exp(-s |xi|^2) on a graph surface.
TrialFunction gaussian_trial(SurfaceId id, double s = 1.0);
/// exp(-s |xi|) on a graph surface.
TrialFunction exponential_trial(SurfaceId id, double s = 1.0);
/// exp(-a sqrt(1 + |xi|^2)) on the hyperboloid.
TrialFunction hyperboloid_trial(double a);
/// Indicator of |xi| <= radius.
TrialFunction disc_indicator_trial(SurfaceId id, double radius = 1.0);
/// exp(-|xi|^4) on a graph surface.
TrialFunction quartic_trial(SurfaceId id);
/// Constant c on a sphere.
TrialFunction constant_trial(SurfaceId id, double c = 1.0);
/// Piecewise-linear radial profile through (r_i, v_i), zero beyond the last knot.
TrialFunction tabulated_radial_trial(SurfaceId id, std::vector<double> r, std::vector<double> v,
                                     std::string name = "table");
/// Builtin trial by name: gaussian, exponential, hyperbolic, disc, quartic, constant.
TrialFunction builtin_trial(SurfaceId id, const std::string& name);

/// Extension operator int f(w) e^{-i x.w} dmu(w) for x in the ambient space.
/// Quadrature places at least ten nodes per oscillation; throws
/// std::domain_error when that would exceed the resolvable node budget.
Estimate<Complex> extension_transform(const TrialFunction& f, const Point& x, const QuadratureSpec& spec);

/// Values of the extension of a radial trial on a two-dimensional graph
/// surface at (rho_i e_1, t_j), evaluated with one shared Hankel table.
/// Entry [j * rhos.size() + i].
std::vector<Complex> radial_extension_grid(const TrialFunction& f, const std::vector<double>& rhos,
                                           const std::vector<double>& ts, const QuadratureSpec& spec);

struct SharpChainReport {
    Estimate<double> l2_conv_sq;  // ||f mu * f mu||_2^2
    Estimate<double> norm_sq;     // ||f||^2 in L^2(mu)
    double sup = 0.0;             // ||mu * mu||_inf
    Estimate<double> bound;       // sup * ||f||^4
    Estimate<double> defect;      // bound - l2_conv_sq
    [[nodiscard]] double relative_defect() const { return defect.value / bound.value; }
};

/// Two-fold convolution (f mu * f mu)(xi, tau) of a radial nonnegative
/// trial, with |xi| = xi_norm.
double trial_convolution(const TrialFunction& f, double xi_norm, double tau, int angular_nodes);

/// Cauchy-Schwarz / Hoelder chain for paraboloid2, cone3 and hyperboloid2.
/// Requires a radial, nonnegative trial (std::invalid_argument otherwise).
SharpChainReport sharp_chain(const TrialFunction& f, const QuadratureSpec& spec);

struct SequenceReport {
    std::vector<double> a;
    std::vector<Estimate<double>> phi;  // ||f_a l * f_a l||_2 / ||f_a||^2
    double ceiling = 0.0;               // sqrt(||l * l||_inf)
    bool increasing = false;
    bool below_ceiling = false;
};

/// Functional values along f_a = exp(-a sqrt(1 + |xi|^2)) on the hyperboloid.
SequenceReport hyperboloid_sequence(const std::vector<double>& a_values, const QuadratureSpec& spec);

struct PlancherelReport {
    Estimate<double> l4_fourth;   // ||E f||_4^4 with a 1/T tail extrapolation in time
    Estimate<double> l2_conv_sq;  // ||f mu * f mu||_2^2
    double ratio = 0.0;
};

/// Fourier-side cross-check for radial trials on paraboloid2.
PlancherelReport plancherel_ratio(const TrialFunction& f, const QuadratureSpec& spec);

using BasePair = std::pair<Point, Point>;

/// Max relative mismatch of f(eta) f(zeta) over pairs sharing eta + zeta and
/// h(eta) + h(zeta); matched pairs are found by root finding along a fan of
/// directions.  Graph surfaces paraboloid2, cone3, hyperboloid2 and
/// perturbed2.  Throws std::domain_error when f is not positive on a sample or
/// when a sample admits no distinct matched pair.
double functional_equation_defect(const TrialFunction& f, const std::vector<BasePair>& samples);

}  // namespace strichlab
