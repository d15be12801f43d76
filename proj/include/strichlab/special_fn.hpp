#pragma once

#include <complex>
#include <vector>

namespace strichlab {

/// Order of a Bessel function, stored doubled so that integer and
/// half-integer orders are exact.
struct BesselOrder {
    int twice_order = 0;

    static constexpr BesselOrder integer(int n) { return {2 * n}; }
    static constexpr BesselOrder half_odd(int twice) { return {twice}; }
    [[nodiscard]] double value() const { return 0.5 * twice_order; }
    [[nodiscard]] bool is_integer() const { return twice_order % 2 == 0; }
};

/// J_nu(x) for x >= 0 and integer or half-integer nu >= 0.
/// Throws std::domain_error for negative x or negative order.
double bessel_j(BesselOrder order, double x);

inline double bessel_j(int n, double x) { return bessel_j(BesselOrder::integer(n), x); }

/// J_0(x), ..., J_nmax(x) from a single normalized backward recurrence.
std::vector<double> bessel_j_all(int nmax, double x);

struct GegenbauerIndex {
    int degree = 0;
    double parameter = 0.5;  // lambda = (d - 2) / 2
};

/// C_k^lambda(t) by the three-term recurrence; |t| <= 1 required.
/// For lambda = 0 returns the Chebyshev limit lim C_k^lambda / lambda = (2/k) T_k
/// (and 1 for k = 0).
double gegenbauer(GegenbauerIndex idx, double t);

/// C_k^lambda(t) / C_k^lambda(1); equals T_k(t) when lambda = 0.
double gegenbauer_normalized(GegenbauerIndex idx, double t);

/// Legendre polynomial P_k(t) (Gegenbauer with lambda = 1/2).
double legendre_p(int k, double t);

/// P_0(t), ..., P_kmax(t).
std::vector<double> legendre_all(int kmax, double t);

/// e^{i k theta}.
std::complex<double> circular_harmonic(int k, double theta);

/// Surface measure of the unit sphere S^n in R^{n+1}.
double sphere_volume(int n);

/// Real orthonormal spherical harmonics on S^2 up to degree kmax at polar
/// angle theta and azimuth phi.  Entry k*k + k + m holds Y_k^m, where
/// m > 0 pairs with cos(m phi) and m < 0 with sin(|m| phi).
std::vector<double> real_spherical_harmonics(int kmax, double theta, double phi);

}  // namespace strichlab
