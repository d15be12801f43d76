// Acceptance run: one PASS/FAIL line per criterion, tolerances and runtime
// budgets pinned below.  Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "strichlab/bessel_mixed.hpp"
#include "strichlab/convolution.hpp"
#include "strichlab/delta_geometry.hpp"
#include "strichlab/extension.hpp"
#include "strichlab/spectral_sphere.hpp"
#include "strichlab/surfaces.hpp"

using namespace strichlab;
using std::numbers::pi;

namespace {

constexpr double kConvRel = 1e-2;
constexpr double kTripleMcRel = 3e-2;
constexpr double kTripleClosedRel = 1e-12;
constexpr double kZeroStraddle = 1e-8;
constexpr double kDefectRel = 1e-3;
constexpr double kCeilingGap = 0.10;
constexpr double kMagic = 1e-10;
constexpr double kMixedRel = 1e-4;
constexpr double kDeltaRel = 1e-4;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

int failures = 0;

void criterion(int n, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.pass && t <= budget_s;
    failures += ok ? 0 : 1;
    std::printf("%s  %2d  %-28s %s  [%.1fs / %.0fs]\n", ok ? "PASS" : "FAIL", n, name, o.detail.c_str(), t, budget_s);
    std::fflush(stdout);
}

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

// twenty interior points per surface, away from boundaries and singular loci
std::vector<Point> interior_points(SurfaceId id) {
    const SurfaceMeasure& s = surface(id);
    std::vector<Point> out;
    for (int i = 0; i < 20; ++i) {
        const double a = 0.37 * i + 0.1;
        if (s.is_sphere()) {
            const double r = 0.25 + 1.5 * i / 19.0;
            if (id == SurfaceId::sphere1)
                out.push_back(pt({r * std::cos(a), r * std::sin(a)}));
            else
                out.push_back(pt({r * std::cos(a) * 0.8, r * std::sin(a) * 0.8, r * 0.6}));
            continue;
        }
        const double r = 1.6 * i / 19.0;
        const double offset = 0.3 + 0.06 * i;
        Point p = Point::Zero(s.ambient_dim);
        p[0] = r * std::cos(a);
        p[1] = r * std::sin(a);
        p[s.ambient_dim - 1] = 2.0 * s.height(r / 2.0) + offset;
        out.push_back(p);
    }
    return out;
}

}  // namespace

int main() {
    const QuadratureSpec QS = QuadratureSpec::defaults();

    criterion(1, "convolution closed forms", 120, [&] {
        double worst = 0.0;
        for (SurfaceId id : {SurfaceId::paraboloid2, SurfaceId::cone3, SurfaceId::hyperboloid2, SurfaceId::sphere2,
                             SurfaceId::sphere1}) {
            const SurfaceMeasure& s = surface(id);
            for (const Point& p : interior_points(id)) {
                const double closed = conv2_closed(s, p);
                const auto o = conv2_oracle(s, p, QS);
                worst = std::max(worst, std::abs(o.value - closed) / closed);
            }
        }
        return Outcome{worst <= kConvRel, "max rel err " + fmt("%.2e", worst) + " (tol " + fmt("%.0e", kConvRel) + ")"};
    });

    criterion(2, "triple sphere convolution", 60, [&] {
        double closed_worst = 0.0;
        for (int i = 0; i <= 60; ++i) {
            const double r = 3.0 * i / 60.0;
            const double ref = r <= 1.0 ? 8.0 * pi * pi : 4.0 * pi * pi * (-1.0 + 3.0 / r);
            closed_worst = std::max(closed_worst, std::abs(conv3_sphere2(r) - ref) / (8.0 * pi * pi));
        }
        auto mc = QS;
        mc.samples = 8'000'000;
        double mc_worst = 0.0;
        for (double r : {0.5, 1.5, 2.5}) {
            const auto e = conv3_monte_carlo(3, r, 0.05, mc);
            mc_worst = std::max(mc_worst, std::abs(e.value - conv3_sphere2(r)) / conv3_sphere2(r));
        }
        return Outcome{closed_worst <= kTripleClosedRel && mc_worst <= kTripleMcRel,
                       "closed " + fmt("%.1e", closed_worst) + ", Monte Carlo max rel " + fmt("%.2e", mc_worst) +
                           " (tol " + fmt("%.0e", kTripleMcRel) + ")"};
    });

    criterion(3, "triple circle profile", 120, [&] {
        std::ofstream plot("acceptance_circle_profile.csv");
        plot << "r,value,error\n";
        bool finite = true, rising = true, falling = true;
        double prev_rise = -1.0, prev_fall = INFINITY, last = -1.0;
        for (int i = 0; i < 300; ++i) {
            const double r = 3.0 * i / 299.0;
            const auto c = conv3_circle(r, QS);
            char line[96];
            std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", r, c.value, c.error);
            plot << line;
            if (std::abs(r - 1.0) >= QS.exclusion && !std::isfinite(c.value)) finite = false;
            if (r >= 0.8 && r <= 0.99) {
                rising = rising && c.value > prev_rise;
                prev_rise = c.value;
            }
            if (r > 1.0 + QS.exclusion) {
                falling = falling && c.value <= prev_fall;
                prev_fall = c.value;
            }
            last = c.value;
        }
        const bool ok = finite && rising && falling && last == 0.0;
        return Outcome{ok, std::string("finite ") + (finite ? "yes" : "no") + ", rising on [0.8,0.99] " +
                               (rising ? "yes" : "no") + ", falling to " + fmt("%g", last) + " at r=3"};
    });

    criterion(4, "Funk-Hecke sign table", 60, [&] {
        int asserted = 0, matched = 0, zeros = 0, zeros_ok = 0;
        for (int d = 3; d <= 9; ++d) {
            const auto fh = funk_hecke_spectrum(d, 12, QS);
            for (int k = 0; k <= 12; ++k) {
                const auto ref = reference_sign(d, k);
                if (!ref) continue;
                ++asserted;
                const auto& l = fh.lambda[static_cast<std::size_t>(k)];
                if (*ref == 0) {
                    ++zeros;
                    const bool ok = std::abs(l.value) <= l.error && l.error <= kZeroStraddle;
                    zeros_ok += ok ? 1 : 0;
                    matched += ok ? 1 : 0;
                } else {
                    matched += fh.sign(k) == *ref ? 1 : 0;
                }
            }
        }
        return Outcome{matched == asserted, std::to_string(matched) + "/" + std::to_string(asserted) +
                                                " signs, " + std::to_string(zeros_ok) + "/" + std::to_string(zeros) +
                                                " zeros straddled within " + fmt("%.0e", kZeroStraddle)};
    });

    criterion(5, "extremizer defects", 300, [&] {
        double worst = 0.0;
        for (double s : {0.5, 1.0, 2.0})
            worst = std::max(worst, std::abs(sharp_chain(gaussian_trial(SurfaceId::paraboloid2, s), QS).relative_defect()));
        worst = std::max(worst, std::abs(sharp_chain(exponential_trial(SurfaceId::cone3), QS).relative_defect()));
        const auto disc = sharp_chain(disc_indicator_trial(SurfaceId::paraboloid2), QS);
        const bool strict = disc.defect.value > disc.defect.error;
        return Outcome{worst <= kDefectRel && strict,
                       "extremizers max rel defect " + fmt("%.1e", worst) + " (tol " + fmt("%.0e", kDefectRel) +
                           "), disc defect " + fmt("%.4g", disc.defect.value) + " +- " + fmt("%.1e", disc.defect.error)};
    });

    criterion(6, "hyperboloid sequence", 180, [&] {
        const auto seq = hyperboloid_sequence({1.0, 2.0, 4.0, 8.0}, QS);
        const double gap = 1.0 - seq.phi.back().value / std::sqrt(pi);
        const bool ok = seq.increasing && seq.below_ceiling && std::abs(seq.ceiling - std::sqrt(pi)) < 1e-12 &&
                        gap <= kCeilingGap;
        return Outcome{ok, "Phi = " + fmt("%.5f", seq.phi[0].value) + ", " + fmt("%.5f", seq.phi[1].value) + ", " +
                               fmt("%.5f", seq.phi[2].value) + ", " + fmt("%.5f", seq.phi[3].value) +
                               "; sqrt(pi) gap at a=8 " + fmt("%.3f", gap)};
    });

    criterion(7, "comparison principle", 120, [&] {
        int strict = 0;
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double r = 0.2 * i, a = 0.7 * i;
            const double tau = 0.1 + 0.2 * i;
            const auto c = comparison_check(Eigen::Vector2d(r * std::cos(a), r * std::sin(a)), tau, QS);
            strict += c.strict ? 1 : 0;
            worst = std::max(worst, c.lhs / c.rhs);
        }
        return Outcome{strict == 10, std::to_string(strict) + "/10 strict, max ratio " + fmt("%.4f", worst)};
    });

    criterion(8, "magic identity", 1, [&] {
        double worst = 0.0;
        for (const auto& t : random_constrained_triples(3, 1000, 2016))
            worst = std::max(worst, std::abs(magic_identity_check(t[0], t[1], t[2])));
        return Outcome{worst < kMagic, "max residual " + fmt("%.1e", worst) + " (tol " + fmt("%.0e", kMagic) + ")"};
    });

    criterion(9, "Bessel monotonicity scan", 180, [&] {
        const auto rep = monotonicity_scan(4, QS);
        int nonzero = 0, below = 0;
        for (const auto& r : rep.rows)
            if (r.idx.max() > 0) {
                ++nonzero;
                below += r.strictly_below ? 1 : 0;
            }
        auto s1 = QS, s2 = QS;
        s1.cutoff_radius = bessel_cutoff(0);
        s2.cutoff_radius = 2.0 * bessel_cutoff(0);
        const auto a = bessel_triple_integral({0, 0, 0}, s1);
        const auto b = bessel_triple_integral({0, 0, 0}, s2);
        const bool repro = std::abs(a.value - b.value) <= a.error;
        return Outcome{nonzero == 124 && below == 124 && repro,
                       std::to_string(below) + "/" + std::to_string(nonzero) + " strictly below I000; I000 " +
                           fmt("%.10f", a.value) + " vs " + fmt("%.10f", b.value) + " (err " + fmt("%.1e", a.error) + ")"};
    });

    criterion(10, "mixed-norm identity", 180, [&] {
        std::mt19937_64 rng(20160501);
        std::normal_distribution<double> g;
        std::uniform_int_distribution<int> nterms(1, 5), degree(-8, 8);
        double worst = 0.0;
        bool below = true;
        for (int i = 0; i < 10; ++i) {
            HarmonicExpansion f{1, {}};
            const int n = nterms(rng);
            for (int j = 0; j < n; ++j) {
                const double re = g(rng), im = g(rng);
                f.terms.push_back({degree(rng), 0, Complex(re, im)});
            }
            f.terms.push_back({1 + i % 8, 0, Complex(0.3, 0.0)});  // never constant
            const auto r = mixed_norm_sixth(f, QS);
            worst = std::max(worst, r.relative_gap());
            below = below && !r.constants_only && r.via_sum.value + r.via_sum.error < r.bound;
        }
        const auto c = mixed_norm_sixth(HarmonicExpansion{1, {{0, 0, Complex(1.3, -0.4)}}}, QS);
        const bool attained = c.constants_only && std::abs(c.via_sum.value - c.bound) <= c.via_sum.error + 1e-9 * c.bound;
        return Outcome{worst <= kMixedRel && below && attained,
                       "max rel gap " + fmt("%.1e", worst) + " (tol " + fmt("%.0e", kMixedRel) +
                           "), nonconstant strictly below bound " + (below ? "yes" : "no") +
                           ", constant attains " + (attained ? "yes" : "no")};
    });

    criterion(11, "trilinear comparison", 600, [&] {
        // the default Sigma levels leave 4 theta harmonics under-resolved
        const QuadratureSpec HQ = QuadratureSpec::high_resolution();
        const auto one = builtin_circle_function("one");
        const auto t1 = t_form(one, one, one, HQ);
        int strict = 0;
        double min_margin = INFINITY;
        for (const char* name : {"cos2", "cos4", "strong2", "square_cos", "mixed"}) {
            const auto h = builtin_circle_function(name);
            const double c = circle_mean(h);
            const auto th = t_form(h, h, h, HQ);
            const double gap = c * c * c * t1.value - th.value;
            const double err = th.error + c * c * c * t1.error;
            strict += gap > err ? 1 : 0;
            min_margin = std::min(min_margin, gap / err);
        }
        const CircleFunction two = [](double) { return 2.0; };
        const auto t2 = t_form(two, two, two, HQ);
        const bool equal = std::abs(t2.value - 8.0 * t1.value) <= t2.error + 8.0 * t1.error;
        return Outcome{strict == 5 && equal, std::to_string(strict) + "/5 strictly below c^3 T(1,1,1) (min gap/err " +
                                                 fmt("%.0f", min_margin) + "), constant 2 equal within error " +
                                                 (equal ? "yes" : "no")};
    });

    criterion(12, "delta-calculus suite", 120, [&] {
        double worst = 0.0;
        bool mono = true;
        for (const auto& c : delta_calculus_suite(QS)) {
            worst = std::max(worst, c.relative);
            mono = mono && c.monotone;
        }
        return Outcome{worst < kDeltaRel && mono, "max rel residual " + fmt("%.1e", worst) + " (tol " +
                                                      fmt("%.0e", kDeltaRel) + "), monotone " + (mono ? "yes" : "no")};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures;
}
