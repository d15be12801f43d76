#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "strichlab/quadrature.hpp"

namespace strichlab {

using Point = Eigen::VectorXd;
using TestFunction = std::function<double(const Point&)>;

/// f : R^d -> R^c whose zero set is the manifold of interest.
struct ImplicitMap {
    int ambient_dim = 0;
    int codim = 1;
    std::function<Eigen::VectorXd(const Point&)> eval;
    /// Optional analytic Jacobian (c x d); central differences when empty.
    std::function<Eigen::MatrixXd(const Point&)> jacobian;

    [[nodiscard]] Eigen::MatrixXd jac(const Point& x) const;
};

/// Scalar implicit map from a scalar function (codimension one).
ImplicitMap scalar_map(int dim, std::function<double(const Point&)> f);

/// sqrt(det(Df Df^T)) at x.  Throws DegenerateGeometry when the smallest
/// singular value of Df is below 1e-8.
double jacobian_factor(const ImplicitMap& f, const Point& x);

/// One coordinate of an integration box.  Periodic axes wrap; axes with
/// fixed_cells > 0 are never refined and are ignored by band pruning, so the
/// implicit map must not depend on them.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
    int fixed_cells = 0;
};
using Box = std::vector<Axis>;

enum class BumpProfile {
    polynomial,  // c (1 - x^2)^8 on [-1, 1]
    cosine,      // c cos^10(pi x / 2) on [-1, 1]
};

/// Unit-mass one-dimensional bump supported on [-1, 1].
double bump(BumpProfile profile, double x);

/// Tensor-product mollifier gamma_eps on R^c.
struct Mollifier {
    double width = 0.1;
    BumpProfile profile = BumpProfile::polynomial;

    [[nodiscard]] double operator()(const Eigen::VectorXd& s) const;
};

struct DeltaResult {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> widths;     // eps_j
    std::vector<double> raw;        // mollified integrals at eps_j
    std::vector<double> increments; // |raw[j+1] - raw[j]|
    double quadrature_error = 0.0;  // midpoint-rule part of `error`
    long long cells = 0;            // integrand evaluations at the finest width

    [[nodiscard]] bool monotone_increments() const;
};

/// Mollified integral of gamma_eps(f(x)) phi(x) over the box at a single width.
/// `cells_across` midpoint cells span the mollifier support along the
/// steepest direction of f.
double mollified_integral(const ImplicitMap& f, const TestFunction& phi, const Box& box, double eps,
                          int cells_across, BumpProfile profile = BumpProfile::polynomial);

/// int delta(f(x)) phi(x) dx via mollification with widths eps0 2^-j,
/// j = 0..spec.halvings, and Richardson extrapolation in eps^2.
/// Throws DegenerateGeometry on rank loss in the band and NonConvergence when
/// the extrapolated values fail to settle.
DeltaResult delta_integral(const ImplicitMap& f, const TestFunction& phi, const Box& box,
                           const QuadratureSpec& spec, BumpProfile profile = BumpProfile::polynomial);

struct CheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double error = 0.0;  // combined error estimate of both sides
};

/// Compares int delta(alpha f) phi with int alpha^{-c} delta(f) phi.
CheckResult scalar_rescale_check(const ImplicitMap& f, const std::function<double(const Point&)>& alpha,
                                 const TestFunction& phi, const Box& box, const QuadratureSpec& spec);

/// Compares delta(t^2 - |x|^2) with (delta(t - |x|) + delta(t + |x|)) / (2|x|) on
/// R^{1+n}; coordinate 0 is t.  The box must keep away from the vertex.
CheckResult null_cone_check(int spatial_dim, const TestFunction& phi, const Box& box,
                            const QuadratureSpec& spec);

/// Compares int_Omega delta(f) phi dx with
/// int_{Psi^-1 Omega} delta(f o Psi) (phi o Psi) |det D Psi| dy.
/// `preimage` must cover Psi^{-1}(Omega) wherever phi and the zero set meet.
CheckResult change_of_variables_check(const ImplicitMap& f, const std::function<Point(const Point&)>& psi,
                                      const TestFunction& phi, const Box& box, const Box& preimage,
                                      const QuadratureSpec& spec);

struct SuiteCheck {
    std::string name;
    CheckResult result;
    double relative = 0.0;   // residual / max(1, |rhs|)
    bool monotone = true;    // increments shrink over the halvings (where tracked)
};

/// Fixed battery of delta-calculus identities: scalar rescaling, change of
/// variables (dilation, rotation), the null cone, and the product rule on
/// Gamma_x = {|y| = 1, |x - y| = 1} against its parametrization for |x| in
/// {0.5, 1, 1.5}.
std::vector<SuiteCheck> delta_calculus_suite(const QuadratureSpec& spec);

}  // namespace strichlab
