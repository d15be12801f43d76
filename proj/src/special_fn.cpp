#include "strichlab/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace strichlab {

namespace {

// Power series; accurate while x^2/4 is modest relative to nu + 1 or x small.
double bessel_series(double nu, double x) {
    const double q = 0.25 * x * x;
    double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

bool use_series(double nu, double x) { return x <= 4.0 || 0.25 * x * x <= 0.5 * (nu + 1.0); }

int miller_start(int nmax, double x) {
    const double big = std::max<double>(nmax, x);
    int m = static_cast<int>(big + 20.0 + std::sqrt(60.0 * big));
    return m + (m % 2);
}

// Integer orders 0..nmax by Miller's backward recurrence normalized with
// J_0 + 2 sum J_2k = 1.
std::vector<double> miller_integer(int nmax, double x) {
    const int m = std::max(miller_start(nmax, x), nmax + 2);
    std::vector<double> out(nmax + 1, 0.0);
    double jp = 0.0, j = 1e-300, norm = 0.0;
    for (int k = m; k >= 1; --k) {
        const double jm = 2.0 * k / x * j - jp;
        jp = j;
        j = jm;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
        // j now holds the unnormalized J_{k-1}
        if (k - 1 <= nmax) out[k - 1] = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    }
    norm += j;
    for (auto& v : out) v /= norm;
    return out;
}

// Spherical Bessel j_l(x) for x above the series range.
double spherical_bessel(int l, double x) {
    const double s = std::sin(x), c = std::cos(x);
    const double j0 = s / x;
    if (l == 0) return j0;
    const double j1 = s / (x * x) - c / x;
    if (l == 1) return j1;
    if (l < x) {
        double a = j0, b = j1;
        for (int k = 1; k < l; ++k) {
            const double next = (2.0 * k + 1.0) / x * b - a;
            a = b;
            b = next;
        }
        return b;
    }
    const int m = miller_start(l, x) + 1;
    double fp = 0.0, f = 1e-300, fl = 0.0, f0 = 0.0, f1 = 0.0;
    for (int k = m; k >= 1; --k) {
        const double fm = (2.0 * k + 1.0) / x * f - fp;
        fp = f;
        f = fm;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            fp *= 1e-250;
            fl *= 1e-250;
            f1 *= 1e-250;
        }
        if (k - 1 == l) fl = f;
        if (k - 1 == 1) f1 = f;
    }
    f0 = f;
    // normalize against whichever of j0, j1 is better conditioned
    if (std::abs(j0) >= std::abs(j1)) return fl * (j0 / f0);
    return fl * (j1 / f1);
}

}  // namespace

double bessel_j(BesselOrder order, double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_j: argument must be nonnegative");
    if (order.twice_order < 0) throw std::domain_error("bessel_j: order must be nonnegative");
    const double nu = order.value();
    if (x == 0.0) return order.twice_order == 0 ? 1.0 : 0.0;
    if (use_series(nu, x)) return bessel_series(nu, x);
    if (order.is_integer()) {
        const int n = order.twice_order / 2;
        return miller_integer(n, x)[n];
    }
    const int l = (order.twice_order - 1) / 2;
    return std::sqrt(2.0 * x / std::numbers::pi) * spherical_bessel(l, x);
}

std::vector<double> bessel_j_all(int nmax, double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_j_all: argument must be nonnegative");
    if (nmax < 0) throw std::domain_error("bessel_j_all: order must be nonnegative");
    std::vector<double> out(nmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x <= 4.0) {
        for (int n = 0; n <= nmax; ++n) out[n] = bessel_series(n, x);
        return out;
    }
    out = miller_integer(nmax, x);
    for (int n = 0; n <= nmax; ++n)
        if (use_series(n, x)) out[n] = bessel_series(n, x);
    return out;
}

double gegenbauer(GegenbauerIndex idx, double t) {
    if (std::abs(t) > 1.0) throw std::domain_error("gegenbauer: |t| must be at most 1");
    if (idx.degree < 0) throw std::domain_error("gegenbauer: negative degree");
    const int k = idx.degree;
    const double lam = idx.parameter;
    if (k == 0) return 1.0;
    if (lam == 0.0) {
        // Chebyshev limit
        return 2.0 / k * std::cos(k * std::acos(t));
    }
    double a = 1.0, b = 2.0 * lam * t;
    for (int n = 2; n <= k; ++n) {
        const double c = (2.0 * t * (n + lam - 1.0) * b - (n + 2.0 * lam - 2.0) * a) / n;
        a = b;
        b = c;
    }
    return b;
}

double gegenbauer_normalized(GegenbauerIndex idx, double t) {
    if (idx.parameter == 0.0) {
        if (std::abs(t) > 1.0) throw std::domain_error("gegenbauer: |t| must be at most 1");
        return std::cos(idx.degree * std::acos(t));
    }
    return gegenbauer(idx, t) / gegenbauer(idx, 1.0);
}

double legendre_p(int k, double t) { return gegenbauer({k, 0.5}, t); }

std::vector<double> legendre_all(int kmax, double t) {
    std::vector<double> p(kmax + 1);
    p[0] = 1.0;
    if (kmax >= 1) p[1] = t;
    for (int n = 2; n <= kmax; ++n) p[n] = ((2.0 * n - 1.0) * t * p[n - 1] - (n - 1.0) * p[n - 2]) / n;
    return p;
}

std::complex<double> circular_harmonic(int k, double theta) { return std::polar(1.0, k * theta); }

double sphere_volume(int n) {
    if (n < 0) throw std::domain_error("sphere_volume: negative dimension");
    const double h = 0.5 * (n + 1);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

std::vector<double> real_spherical_harmonics(int kmax, double theta, double phi) {
    const int size = (kmax + 1) * (kmax + 1);
    std::vector<double> y(size, 0.0);
    const double x = std::cos(theta), s = std::sin(theta);
    double pmm = std::sqrt(1.0 / (4.0 * std::numbers::pi));
    for (int m = 0; m <= kmax; ++m) {
        if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        const double cm = std::cos(m * phi), sm = std::sin(m * phi);
        auto store = [&](int k, double p) {
            if (m == 0) {
                y[k * k + k] = p;
            } else {
                y[k * k + k + m] = std::numbers::sqrt2 * p * cm;
                y[k * k + k - m] = std::numbers::sqrt2 * p * sm;
            }
        };
        store(m, pmm);
        if (m == kmax) break;
        double p_prev = pmm;
        double p_cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
        store(m + 1, p_cur);
        for (int k = m + 2; k <= kmax; ++k) {
            const double a = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
            const double a_prev = std::sqrt((4.0 * (k - 1.0) * (k - 1.0) - 1.0) /
                                            ((k - 1.0) * (k - 1.0) - double(m) * m));
            const double p_next = a * (x * p_cur - p_prev / a_prev);
            p_prev = p_cur;
            p_cur = p_next;
            store(k, p_cur);
        }
    }
    return y;
}

}  // namespace strichlab
