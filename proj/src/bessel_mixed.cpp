#include "strichlab/bessel_mixed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "strichlab/errors.hpp"
#include "strichlab/extension.hpp"
#include "strichlab/parallel.hpp"
#include "strichlab/special_fn.hpp"

namespace strichlab {

using std::numbers::pi;

int TripleIndex::max() const { return std::max({k, l, m}); }

double bessel_cutoff(int n) { return std::max(60.0, 4.0 * (n * n + 1.0)); }

namespace {

constexpr int kIndexCap = 16;

void check_index(int n) {
    if (n < 0 || n > kIndexCap) throw std::invalid_argument("Bessel index must lie in [0, 16]");
}

// J_0^2 .. J_nmax^2 on Gauss panels of unit-ish width over [lo, hi]
struct SquaredBesselTable {
    std::vector<double> r, w;
    std::vector<std::vector<double>> sq;  // sq[i][n]

    SquaredBesselTable(int nmax, double lo, double hi, int order) {
        const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
        const Rule rule = composite_gauss(lo, hi, panels, order);
        r = rule.nodes;
        w = rule.weights;
        sq.resize(r.size());
        parallel_for(r.size(), [&](std::size_t i) {
            auto j = bessel_j_all(nmax, r[i]);
            for (double& x : j) x *= x;
            sq[i] = std::move(j);
        });
    }
};

// a linear form sum_j c_j J_j^2
using Form = std::vector<double>;

double apply(const Form& f, const std::vector<double>& sq) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j] != 0.0) acc += f[j] * sq[j];
    return acc;
}

double panel_integral(const SquaredBesselTable& t, const std::array<const Form*, 3>& forms) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.r.size(); ++i)
        acc += t.w[i] * t.r[i] * apply(*forms[0], t.sq[i]) * apply(*forms[1], t.sq[i]) * apply(*forms[2], t.sq[i]);
    return acc;
}

// Hankel asymptotics: with mu = 4 n^2 and e = (-1)^n,
//   pi r J_n(r)^2 = 1 + e sin 2r + e (mu - 1) cos 2r / (4 r) + (mu - 1) / (8 r^2) + ...
// where the dropped terms are oscillatory O(r^-2) or O(r^-3).  Each form is
// then a + b sin 2r + (d / r) cos 2r + e / r^2 and the product of three is
// expanded to relative order r^-2 (oscillatory parts to order r^-1).
struct TailTerms {
    double value = 0.0;
    double remainder = 0.0;
};

TailTerms asymptotic_tail(const std::array<const Form*, 3>& forms, double R) {
    double a[3], b[3], d[3], e[3];
    double mu_max = 0.0;
    for (int i = 0; i < 3; ++i) {
        a[i] = b[i] = d[i] = e[i] = 0.0;
        const Form& f = *forms[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (f[j] == 0.0) continue;
            const double sgn = j % 2 == 0 ? 1.0 : -1.0;
            const double mu = 4.0 * static_cast<double>(j * j);
            mu_max = std::max(mu_max, mu);
            a[i] += f[j];
            b[i] += sgn * f[j];
            d[i] += sgn * f[j] * (mu - 1.0) / 4.0;
            e[i] += f[j] * (mu - 1.0) / 8.0;
        }
    }
    const std::complex<double> I(0.0, 1.0);
    // int_R^inf e^{i w r} r^-p dr by repeated integration by parts
    auto osc2 = [&](double w) {
        const auto x = std::exp(I * (w * R));
        return x * (I / (w * R * R) + 2.0 / (w * w * R * R * R) - 6.0 * I / (w * w * w * R * R * R * R));
    };
    auto osc3 = [&](double w) {
        const auto x = std::exp(I * (w * R));
        return x * (I / (w * R * R * R) + 3.0 / (w * w * R * R * R * R));
    };
    // leading order
    const double q0 = a[0] * a[1] * a[2];
    const double q1 = a[0] * a[1] * b[2] + a[0] * b[1] * a[2] + b[0] * a[1] * a[2];
    const double q2 = a[0] * b[1] * b[2] + b[0] * a[1] * b[2] + b[0] * b[1] * a[2];
    const double q3 = b[0] * b[1] * b[2];
    double tail = (q0 + 0.5 * q2) / R + (q1 + 0.75 * q3) * osc2(2.0).imag() - 0.5 * q2 * osc2(4.0).real() -
                  0.25 * q3 * osc2(6.0).imag();
    // order 1/r: d_i cos 2r times the other two factors, purely oscillatory
    double c2 = 0.0, s4 = 0.0, c6 = 0.0, avg2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const double alpha = a[j] * a[k], beta = a[j] * b[k] + b[j] * a[k], gamma = b[j] * b[k];
        c2 += d[i] * (alpha + 0.25 * gamma);
        s4 += d[i] * 0.5 * beta;
        c6 -= d[i] * 0.25 * gamma;
        // order 1/r^2 averages
        avg2 += e[i] * (alpha + 0.5 * gamma) + 0.5 * d[j] * d[k] * a[i];
    }
    tail += c2 * osc3(2.0).real() + s4 * osc3(4.0).imag() + c6 * osc3(6.0).real() + avg2 / (3.0 * R * R * R);
    TailTerms out;
    out.value = tail / (pi * pi * pi);
    // the first dropped order is smaller by about (mu + 1) / (8 R)
    const double last = std::abs(c2) + std::abs(s4) + std::abs(c6) + std::abs(avg2) / R;
    out.remainder = last * (mu_max + 1.0) / (8.0 * R) / (pi * pi * pi * R * R);
    return out;
}

struct TripleTables {
    int nmax;
    double R;
    SquaredBesselTable lo12, lo16, hi16;
    TripleTables(int n, double cutoff)
        : nmax(n), R(cutoff), lo12(n, 0.0, cutoff, 12), lo16(n, 0.0, cutoff, 16), hi16(n, cutoff, 2.0 * cutoff, 16) {}

    [[nodiscard]] Estimate<double> integrate(const std::array<const Form*, 3>& forms) const {
        const double base12 = panel_integral(lo12, forms);
        const double base16 = panel_integral(lo16, forms);
        const auto tail_R = asymptotic_tail(forms, R), tail_2R = asymptotic_tail(forms, 2.0 * R);
        const double at_R = base16 + tail_R.value;
        const double at_2R = base16 + panel_integral(hi16, forms) + tail_2R.value;
        return {at_2R, std::abs(at_2R - at_R) + tail_R.remainder + std::abs(base16 - base12) + 1e-15 * std::abs(at_2R)};
    }
};

double resolve_cutoff(int n, const QuadratureSpec& spec) {
    return spec.cutoff_radius > 0.0 ? spec.cutoff_radius : bessel_cutoff(n);
}

Form unit_form(int n, int size) {
    Form f(static_cast<std::size_t>(size + 1), 0.0);
    f[static_cast<std::size_t>(n)] = 1.0;
    return f;
}

}  // namespace

Estimate<double> bessel_triple_integral(TripleIndex idx, const QuadratureSpec& spec) {
    for (int n : {idx.k, idx.l, idx.m}) check_index(n);
    std::array<int, 3> s{idx.k, idx.l, idx.m};
    std::sort(s.begin(), s.end());
    const int n = s[2];
    const TripleTables tables(n, resolve_cutoff(n, spec));
    const Form f0 = unit_form(s[0], n), f1 = unit_form(s[1], n), f2 = unit_form(s[2], n);
    return tables.integrate({&f0, &f1, &f2});
}

std::vector<double> MonotonicityReport::diagonal() const {
    std::vector<double> out;
    for (const auto& row : rows)
        if (row.idx.k == row.idx.l && row.idx.l == row.idx.m) out.push_back(row.value.value);
    return out;
}

MonotonicityReport monotonicity_scan(int cap, const QuadratureSpec& spec) {
    check_index(cap);
    MonotonicityReport rep;
    rep.cap = cap;
    const TripleTables tables(cap, resolve_cutoff(cap, spec));
    std::vector<Form> forms;
    for (int n = 0; n <= cap; ++n) forms.push_back(unit_form(n, cap));
    // one evaluation per sorted triple, shared by its permutations
    std::map<std::array<int, 3>, Estimate<double>> cache;
    for (int k = 0; k <= cap; ++k)
        for (int l = 0; l <= cap; ++l)
            for (int m = 0; m <= cap; ++m) {
                std::array<int, 3> s{k, l, m};
                std::sort(s.begin(), s.end());
                auto it = cache.find(s);
                if (it == cache.end()) {
                    const auto v = tables.integrate({&forms[static_cast<std::size_t>(s[0])],
                                                     &forms[static_cast<std::size_t>(s[1])],
                                                     &forms[static_cast<std::size_t>(s[2])]});
                    it = cache.emplace(s, v).first;
                }
                rep.rows.push_back({{k, l, m}, it->second, false});
            }
    rep.i000 = cache.at({0, 0, 0});
    for (auto& row : rep.rows) {
        if (row.idx.k == 0 && row.idx.l == 0 && row.idx.m == 0) continue;
        row.strictly_below = row.value.value + row.value.error < rep.i000.value - rep.i000.error;
        rep.all_below = rep.all_below && row.strictly_below;
    }
    return rep;
}

HarmonicExtensionSample harmonic_extension_d2(int k, double r, const QuadratureSpec& spec) {
    if (k < 0 || k > 12) throw std::invalid_argument("harmonic_extension_d2: k must lie in [0, 12]");
    if (!(r > 0.0) || r > 40.0) throw std::invalid_argument("harmonic_extension_d2: r must lie in (0, 40]");
    HarmonicExtensionSample out;
    out.k = k;
    // stay clear of the zeros of J_k
    auto near_zero = [k](double x) {
        const double h = 0.02;
        return std::signbit(bessel_j(k, x - h)) != std::signbit(bessel_j(k, x + h)) ||
               std::abs(bessel_j(k, x)) < 1e-8;
    };
    while (near_zero(r)) r += 0.05;
    out.r = r;
    TrialFunction f;
    f.surface = SurfaceId::sphere1;
    f.name = "harmonic";
    f.decay = DecayClass::compact(1.0);
    f.profile = [k](const Point& w) { return std::pow(Complex(w[0], w[1]), k); };
    Point x(2);
    x << r, 0.0;
    out.measured = extension_transform(f, x, spec).value;
    out.model = std::pow(Complex(0.0, 1.0), k) * bessel_j(k, r);
    out.ratio = out.measured / out.model;
    return out;
}

double MixedNormResult::relative_gap() const {
    return std::abs(via_sum.value - via_direct.value) / std::max(std::abs(via_direct.value), 1e-300);
}

MixedNormResult mixed_norm_sixth(const HarmonicExpansion& f, const QuadratureSpec& spec) {
    if (f.sphere_dim != 1) throw std::invalid_argument("mixed_norm_sixth: expansion must live on S^1");
    const int n = f.max_degree();
    if (n > 8) throw std::invalid_argument("mixed_norm_sixth: degree above 8");
    // |a_n|^2 summed over +-n after merging repeated degrees
    std::map<int, Complex> merged;
    for (const auto& t : f.terms) merged[t.degree] += t.coeff;
    Form A(static_cast<std::size_t>(n + 1), 0.0);
    for (const auto& [deg, c] : merged) A[static_cast<std::size_t>(std::abs(deg))] += std::norm(c);

    MixedNormResult out;
    double mass = 0.0;
    for (double a : A) mass += a;
    out.constants_only = mass == A[0];
    if (mass == 0.0) return out;

    const TripleTables tables(n, resolve_cutoff(n, spec));
    out.via_direct = tables.integrate({&A, &A, &A});
    std::vector<Form> units;
    for (int j = 0; j <= n; ++j) units.push_back(unit_form(j, n));
    double sum = 0.0, err = 0.0;
    for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l)
            for (int m = 0; m <= n; ++m) {
                const double w = A[static_cast<std::size_t>(k)] * A[static_cast<std::size_t>(l)] * A[static_cast<std::size_t>(m)];
                if (w == 0.0) continue;
                std::array<int, 3> s{k, l, m};
                std::sort(s.begin(), s.end());
                const auto v = tables.integrate({&units[static_cast<std::size_t>(s[0])],
                                                 &units[static_cast<std::size_t>(s[1])],
                                                 &units[static_cast<std::size_t>(s[2])]});
                sum += w * v.value;
                err += w * v.error;
            }
    out.via_sum = {sum, err};
    const Form e0 = unit_form(0, n);
    out.bound = tables.integrate({&e0, &e0, &e0}).value * mass * mass * mass;
    return out;
}

Estimate<double> bessel_triple_via_sigma(TripleIndex idx, const QuadratureSpec& spec) {
    for (int n : {idx.k, idx.l, idx.m}) check_index(n);
    SigmaIntegrand F;
    F.eval = [idx](const Hexad& w) {
        return std::pow(w[0] * std::conj(w[1]), idx.k) * std::pow(w[2] * std::conj(w[3]), idx.l) *
               std::pow(w[4] * std::conj(w[5]), idx.m);
    };
    const auto s = sigma_integrate(F, spec);
    const double sign = (idx.k + idx.l + idx.m) % 2 == 0 ? 1.0 : -1.0;
    const double scale = std::pow(2.0 * pi, 5);
    return {sign * s.value.real() / scale, (s.error + std::abs(s.value.imag())) / scale};
}

}  // namespace strichlab
