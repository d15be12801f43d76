#pragma once

#include <complex>
#include <vector>

#include "strichlab/quadrature.hpp"
#include "strichlab/spectral_sphere.hpp"

namespace strichlab {

struct TripleIndex {
    int k = 0, l = 0, m = 0;
    [[nodiscard]] int max() const;
};

/// I(k, l, m) = int_0^inf J_k^2 J_l^2 J_m^2 r dr.  Gauss panels on [0, R]
/// with R = max(60, 4 (n^2 + 1)) for the largest index n (or
/// spec.cutoff_radius when set), closed by the averaged large-r asymptotics
/// plus the oscillatory tails to second order.  The error adds the panel-order
/// difference, the change when the cutoff is doubled and a bound on the first
/// dropped asymptotic order.
Estimate<double> bessel_triple_integral(TripleIndex idx, const QuadratureSpec& spec);

/// Default cutoff for indices up to n.
double bessel_cutoff(int n);

struct ScanRow {
    TripleIndex idx;
    Estimate<double> value;
    bool strictly_below = false;  // value + error < I000 - I000 error
};

struct MonotonicityReport {
    int cap = 0;
    Estimate<double> i000;
    std::vector<ScanRow> rows;  // lexicographic in (k, l, m), including (0, 0, 0)
    bool all_below = true;      // every nonzero triple strictly below I000
    /// I(k, k, k) for k <= cap.
    [[nodiscard]] std::vector<double> diagonal() const;
};

/// All triples with indices <= cap on one shared Bessel table.
MonotonicityReport monotonicity_scan(int cap, const QuadratureSpec& spec);

struct HarmonicExtensionSample {
    int k = 0;
    double r = 0.0;  // evaluation radius actually used
    Complex measured{};
    Complex model{};  // i^k J_k(r)
    Complex ratio{};
};

/// Extension of w -> w^k on S^1 at x = (r, 0) against i^k J_k(r).  Radii
/// within 0.02 of a zero of J_k are shifted outward in steps of 0.05.
HarmonicExtensionSample harmonic_extension_d2(int k, double r, const QuadratureSpec& spec);

struct MixedNormResult {
    Estimate<double> via_sum;     // sum |a_k|^2 |a_l|^2 |a_m|^2 I(k, l, m)
    Estimate<double> via_direct;  // int (sum |a_k|^2 J_k^2)^3 r dr
    double bound = 0.0;           // I(0, 0, 0) (sum |a_k|^2)^3
    bool constants_only = false;  // only degree 0 carries mass
    [[nodiscard]] double relative_gap() const;
};

/// Sixth power of the L^6_rad L^2_ang norm of the extension of f on S^1, by
/// the triple sum and by direct radial quadrature.  Degrees n and -n share
/// J_|n|.
MixedNormResult mixed_norm_sixth(const HarmonicExpansion& f, const QuadratureSpec& spec);

/// (-1)^{k+l+m} (2 pi)^{-5} times the Sigma integral of
/// (w1 conj w2)^k (w3 conj w4)^l (w5 conj w6)^m; equals I(k, l, m).
Estimate<double> bessel_triple_via_sigma(TripleIndex idx, const QuadratureSpec& spec);

}  // namespace strichlab
