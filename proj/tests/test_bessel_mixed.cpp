#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "strichlab/bessel_mixed.hpp"

using namespace strichlab;
using std::numbers::pi;

TEST_CASE("reference value of I(0,0,0)") {
    const auto QS = QuadratureSpec::defaults();
    const auto i0 = bessel_triple_integral({0, 0, 0}, QS);
    CHECK(i0.error < 1e-6);
    // pinned project constant, cross-checked against the Sigma representation below
    CHECK(std::abs(i0.value - 0.3368279619) < 1e-9 + i0.error);
    auto doubled = QS;
    doubled.cutoff_radius = 2.0 * bessel_cutoff(0);
    const auto i0b = bessel_triple_integral({0, 0, 0}, doubled);
    CHECK(std::abs(i0b.value - i0.value) < i0.error);
}

TEST_CASE("monotonicity examples and permutation symmetry") {
    const auto QS = QuadratureSpec::defaults();
    const auto i0 = bessel_triple_integral({0, 0, 0}, QS);
    const auto i1 = bessel_triple_integral({1, 0, 0}, QS);
    CHECK(i1.value + i1.error < i0.value - i0.error);
    const double ref = bessel_triple_integral({2, 1, 0}, QS).value;
    for (TripleIndex t : {TripleIndex{2, 0, 1}, {1, 2, 0}, {1, 0, 2}, {0, 2, 1}, {0, 1, 2}})
        CHECK(bessel_triple_integral(t, QS).value == ref);
    CHECK_THROWS_AS(bessel_triple_integral({17, 0, 0}, QS), std::invalid_argument);
    CHECK_THROWS_AS(bessel_triple_integral({-1, 0, 0}, QS), std::invalid_argument);
}

TEST_CASE("monotonicity scan") {
    const auto QS = QuadratureSpec::defaults();
    const auto empty = monotonicity_scan(0, QS);
    CHECK(empty.rows.size() == 1);
    CHECK(empty.all_below);

    const auto rep = monotonicity_scan(4, QS);
    CHECK(rep.rows.size() == 125);
    CHECK(rep.all_below);
    int below = 0;
    for (const auto& row : rep.rows) below += row.strictly_below ? 1 : 0;
    CHECK(below == 124);

    // doubling the cutoff moves every entry by less than its error bar
    auto doubled = QS;
    doubled.cutoff_radius = 2.0 * bessel_cutoff(4);
    const auto rep2 = monotonicity_scan(4, doubled);
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        CHECK(std::abs(rep.rows[i].value.value - rep2.rows[i].value.value) < rep.rows[i].value.error);

    const auto diag = monotonicity_scan(6, QS).diagonal();
    bool decreasing = true;
    for (std::size_t k = 1; k < diag.size(); ++k) decreasing = decreasing && diag[k] < diag[k - 1];
    MESSAGE("I(k,k,k) decreasing for k <= 6: " << decreasing);
}

TEST_CASE("radial and Sigma representations agree") {
    const auto QS = QuadratureSpec::defaults();
    for (int k : {0, 1, 2}) {
        const auto radial = bessel_triple_integral({k, 0, 0}, QS);
        const auto sigma = bessel_triple_via_sigma({k, 0, 0}, QS);
        CHECK(std::abs(radial.value - sigma.value) <= radial.error + sigma.error);
        CHECK(sigma.error < 1e-6);
    }
}

TEST_CASE("harmonic extension on the circle") {
    const auto QS = QuadratureSpec::defaults();
    for (int k : {0, 1, 2, 5, 12}) {
        for (double r : {1.0, 3.3, 7.0, 25.0}) {
            const auto s = harmonic_extension_d2(k, r, QS);
            const double sign = k % 2 == 0 ? 1.0 : -1.0;
            CHECK(std::abs(s.ratio * sign - 2.0 * pi) < 1e-4 * 2.0 * pi);
        }
    }
    // first zero of J_0 is avoided
    const auto z = harmonic_extension_d2(0, 2.404825557695773, QS);
    CHECK(z.r > 2.42);
    CHECK(std::abs(z.ratio - 2.0 * pi) < 1e-4 * 2.0 * pi);
    CHECK_THROWS_AS(harmonic_extension_d2(13, 1.0, QS), std::invalid_argument);
    CHECK_THROWS_AS(harmonic_extension_d2(1, 41.0, QS), std::invalid_argument);
}

TEST_CASE("mixed norm identity and sharp bound") {
    const auto QS = QuadratureSpec::defaults();
    const double i0 = bessel_triple_integral({0, 0, 0}, QS).value;
    const auto c = mixed_norm_sixth(HarmonicExpansion{1, {{0, 0, 1.0}}}, QS);
    CHECK(c.constants_only);
    CHECK(c.via_sum.value == doctest::Approx(i0).epsilon(1e-12));
    CHECK(c.relative_gap() < 1e-10);

    const double h = 1.0 / std::sqrt(2.0);
    const auto two = mixed_norm_sixth(HarmonicExpansion{1, {{0, 0, h}, {2, 0, h}}}, QS);
    CHECK(two.via_sum.value + two.via_sum.error < i0);
    CHECK(!two.constants_only);

    const auto zero = mixed_norm_sixth(HarmonicExpansion{1, {}}, QS);
    CHECK(zero.via_sum.value == 0.0);
    CHECK(zero.via_direct.value == 0.0);

    // negative degrees share J_|n|
    const auto pm = mixed_norm_sixth(HarmonicExpansion{1, {{3, 0, h}, {-3, 0, h}}}, QS);
    const auto single = mixed_norm_sixth(HarmonicExpansion{1, {{3, 0, 1.0}}}, QS);
    CHECK(pm.via_sum.value == doctest::Approx(single.via_sum.value).epsilon(1e-13));

    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> deg(-8, 8);
    for (int trial = 0; trial < 10; ++trial) {
        HarmonicExpansion f{1, {}};
        for (int j = 0; j < 4; ++j) f.terms.push_back({deg(rng), 0, Complex(normal(rng), normal(rng))});
        double norm = 0.0;
        for (int n = -8; n <= 8; ++n) {
            Complex a{};
            for (const auto& t : f.terms)
                if (t.degree == n) a += t.coeff;
            norm += std::norm(a);
        }
        for (auto& t : f.terms) t.coeff /= std::sqrt(norm);
        const auto r = mixed_norm_sixth(f, QS);
        CHECK(r.relative_gap() < 1e-4);
        CHECK(r.bound == doctest::Approx(i0).epsilon(1e-7));
        if (!r.constants_only) CHECK(r.via_sum.value + r.via_sum.error < r.bound);
    }
    CHECK_THROWS_AS(mixed_norm_sixth(HarmonicExpansion{1, {{9, 0, 1.0}}}, QS), std::invalid_argument);
}
