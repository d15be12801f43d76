#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strichlab/quadrature.hpp"

namespace strichlab {

using Complex = std::complex<double>;

/// One term of a harmonic expansion.  On S^1 the basis function of degree n
/// (any integer) is e^{i n theta} / sqrt(2 pi); on S^2 it is the real
/// orthonormal harmonic of degree k and order m (|m| <= k).
struct HarmonicTerm {
    int degree = 0;
    int order = 0;
    Complex coeff{};
};

struct HarmonicExpansion {
    int sphere_dim = 1;  // 1 for S^1, 2 for S^2
    std::vector<HarmonicTerm> terms;

    [[nodiscard]] int max_degree() const;
    /// Value at theta (S^1) or at the polar/azimuthal pair (theta, phi) (S^2).
    [[nodiscard]] Complex operator()(double theta, double phi = 0.0) const;
    /// Squared L^2 norm of the degree-k component.
    [[nodiscard]] double component_norm_sq(int k) const;
};

/// Residual |w1+w2|^2 + |w2+w3|^2 + |w3+w1|^2 - 4 for unit vectors whose sum
/// is a unit vector.  Throws std::invalid_argument when the constraint fails
/// by more than 1e-12.
double magic_identity_check(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2, const Eigen::VectorXd& w3);

/// Random unit triples in R^dim whose sum is a unit vector.
std::vector<std::array<Eigen::VectorXd, 3>> random_constrained_triples(int dim, int count, std::uint64_t seed);

/// Funk-Hecke eigenvalues of the kernel |w - v| |w + v|^{d-3} on S^{d-1}.
struct FunkHeckeSpectrum {
    int dim = 3;
    std::string kernel;
    std::vector<Estimate<double>> lambda;
    /// +1 or -1 when the error bar excludes zero, 0 otherwise.
    [[nodiscard]] int sign(int k) const;
};

FunkHeckeSpectrum funk_hecke_spectrum(int dim, int kmax, const QuadratureSpec& spec);

/// Signs of Lambda_k(S^{d-1}) in the reference pattern; empty where the
/// pattern leaves the sign open (d >= 8, k >= 3).
std::optional<int> reference_sign(int dim, int k);

struct HFormResult {
    double diagonal = 0.0;  // sum_k Lambda_k ||Y_k||^2
    double direct = 0.0;    // double quadrature of conj(g(w)) g(v) |w - v|
    double relative_gap = 0.0;
};

/// Quadratic form H(g) on S^2, evaluated diagonally and by direct double
/// quadrature.  Throws NonConvergence when the two disagree beyond 1e-4
/// relative.
HFormResult h_form(const HarmonicExpansion& g, const QuadratureSpec& spec);

/// Six points of S^1 as unit complex numbers.
using Hexad = std::array<Complex, 6>;

/// F = outer(w1, w2, w3) * eval(w1, ..., w6); outer is optional and is
/// evaluated once per outer node (only w[0..2] are meaningful there).
struct SigmaIntegrand {
    std::function<Complex(const Hexad&)> eval;
    std::function<Complex(const Hexad&)> outer;
    bool antipodal = false;    // F(-w) = F(w)
    bool permutation = false;  // F symmetric under relabeling of the six points
};

enum class SigmaMode { tensor, monte_carlo };

/// Integral of F against the measure delta(w1 + ... + w6) dsigma^6 on (S^1)^6.
/// Angles of w1, w2, w3 are integrated numerically (tanh-sinh panels split at
/// the loci where the remaining fiber degenerates, or seeded Monte Carlo);
/// the fiber over w1 + w2 + w3 is resolved in closed form.
Estimate<Complex> sigma_integrate(const SigmaIntegrand& F, const QuadratureSpec& spec,
                                  SigmaMode mode = SigmaMode::tensor);

/// Real function on S^1 as a function of the angle.
using CircleFunction = std::function<double(double)>;

/// T(h1, h2, h3): the integral of h1(w1) h2(w2) h3(w3) (|w4 + w5 + w6|^2 - 1)
/// against Sigma.
Estimate<double> t_form(const CircleFunction& h1, const CircleFunction& h2, const CircleFunction& h3,
                        const QuadratureSpec& spec, SigmaMode mode = SigmaMode::tensor);

struct Step1Probe {
    Estimate<double> lhs;  // f(w1) ... f(w6) (|w4 + w5 + w6|^2 - 1)
    Estimate<double> rhs;  // T(f^2, f^2, f^2)
    Estimate<double> gap;  // rhs - lhs
};

/// Both sides of the conjectured six-linear to trilinear reduction.  Requires
/// f >= 0 and f(theta + pi) = f(theta) (std::invalid_argument otherwise).
Step1Probe step1_probe(const CircleFunction& f, const QuadratureSpec& spec, SigmaMode mode = SigmaMode::tensor);

/// Mean of h over S^1 (normalized arc length).
double circle_mean(const CircleFunction& h);

/// Builtin circle functions: one, cos2, cos4, strong2, square_cos, mixed.
CircleFunction builtin_circle_function(const std::string& name);

/// Periodic piecewise-linear interpolant through (theta_i, v_i), theta in [0, 2 pi).
CircleFunction tabulated_circle_function(std::vector<double> theta, std::vector<double> v);

}  // namespace strichlab
