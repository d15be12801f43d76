#pragma once

#include <functional>
#include <string>

#include "strichlab/delta_geometry.hpp"
#include "strichlab/quadrature.hpp"
#include "strichlab/surfaces.hpp"

namespace strichlab {

/// Density of a two- or three-fold convolution of a catalog measure.
struct ConvolutionProfile {
    SurfaceId surface;
    int fold = 2;
    std::function<double(const Point&)> eval;  // +inf on the singular locus
    std::string support;                       // human-readable support description
    std::string singular_locus;
};

/// Closed-form mu * mu at p = (xi, tau) (graphs) or xi (spheres).  Zero
/// outside the support, interior limits on its boundary, +inf on singular
/// points.  Throws std::invalid_argument for perturbed2, which has no closed
/// form.
double conv2_closed(const SurfaceMeasure& s, const Point& p);

/// Distance-like gap between p and the nearest singular point or support
/// boundary of mu * mu (in the units of the defining inequality).
double singular_gap(const SurfaceMeasure& s, const Point& p);

/// Mollified evaluation of the defining delta integral over base parameters.
/// The spatial delta is resolved by zeta = xi - eta; the remaining scalar
/// delta goes through delta_integral.  Throws SingularProximity when
/// singular_gap(p) < spec.exclusion.
Estimate<double> conv2_oracle(const SurfaceMeasure& s, const Point& p, const QuadratureSpec& spec);

/// sigma_2 * sigma_2 * sigma_2 at |xi| = r.
double conv3_sphere2(double r);

struct CircleConvolution {
    double value = 0.0;   // +inf at r = 1
    double error = 0.0;
    bool near_singular = false;  // |r - 1| < spec.exclusion
};

/// sigma_1 * sigma_1 * sigma_1 at |xi| = r by one-dimensional quadrature
/// over w = |xi - omega|.  The support is taken open at r = 3 (value 0).
CircleConvolution conv3_circle(double r, const QuadratureSpec& spec);

/// Monte-Carlo estimate of sigma * sigma * sigma (dimension 2 or 3) at
/// |xi| = r: (area)^2 E[gamma_eps(|xi - w1 - w2| - 1)] with mollifier width
/// eps, seeded by spec.seed.
Estimate<double> conv3_monte_carlo(int dim, double r, double eps, const QuadratureSpec& spec);

ConvolutionProfile convolution_profile(SurfaceId id, int fold, const QuadratureSpec& spec = {});

struct ComparisonResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double error = 0.0;
    bool strict = false;
};

/// Perturbed-paraboloid convolution at (xi, |xi|^2/2 + |xi|^4/8 + tau) against
/// the paraboloid value pi/2 at (xi, |xi|^2/2 + tau).
ComparisonResult comparison_check(const Eigen::Vector2d& xi, double tau, const QuadratureSpec& spec);

}  // namespace strichlab
