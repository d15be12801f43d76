#include <cmath>
#include <numbers>

#include "doctest.h"
#include "strichlab/extension.hpp"
#include "strichlab/special_fn.hpp"

using namespace strichlab;
using std::numbers::pi;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

Eigen::VectorXd base(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

Eigen::VectorXd base(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

// Phi(f_a)^2 = pi * 4a e^{4a} E1(4a)
double hyperboloid_phi_exact(double a) {
    const double x = 4.0 * a;
    const double e1 = -std::expint(-x);
    return std::sqrt(pi * x * std::exp(x) * e1);
}

}  // namespace

TEST_CASE("sphere extensions match classical closed forms") {
    const auto QS = QuadratureSpec::defaults();
    const auto one1 = constant_trial(SurfaceId::sphere1);
    const auto one2 = constant_trial(SurfaceId::sphere2);
    CHECK(extension_transform(one1, pt({0.0, 0.0}), QS).value.real() == doctest::Approx(2.0 * pi).epsilon(1e-12));
    for (double r : {0.5, 3.0, 17.0, 60.0}) {
        const auto e1 = extension_transform(one1, pt({r * 0.6, r * 0.8}), QS);
        CHECK(std::abs(e1.value - 2.0 * pi * bessel_j(0, r)) < 1e-6);
        const auto e2 = extension_transform(one2, pt({0.0, r * 0.6, r * 0.8}), QS);
        CHECK(std::abs(e2.value - 4.0 * pi * std::sin(r) / r) < 1e-6);
    }
}

TEST_CASE("extension of a paraboloid Gaussian") {
    // int e^{-|w|^2} e^{-i x.w - i t |w|^2} dw = pi/(1+it) exp(-|x|^2 / (4 (1+it)))
    const auto QS = QuadratureSpec::defaults();
    const auto g = gaussian_trial(SurfaceId::paraboloid2);
    auto exact = [](double rho, double t) {
        const std::complex<double> z(1.0, t);
        return pi / z * std::exp(-rho * rho / (4.0 * z));
    };
    for (auto [rho, t] : {std::pair{0.0, 0.0}, {1.5, 0.0}, {2.0, 3.0}, {4.0, -7.0}}) {
        const auto e = extension_transform(g, pt({rho, 0.0, t}), QS);
        CHECK(std::abs(e.value - exact(rho, t)) < 1e-8);
        CHECK(e.error < 1e-6);
    }
    // the same integral through the non-radial tensor path
    TrialFunction h = g;
    h.radial = nullptr;
    const auto e = extension_transform(h, pt({1.0, -0.5, 2.0}), QS);
    CHECK(std::abs(e.value - exact(std::hypot(1.0, 0.5), 2.0)) < 1e-7);

    const std::vector<double> rhos{0.0, 1.5, 4.0}, ts{0.0, 3.0, -7.0};
    const auto grid = radial_extension_grid(g, rhos, ts, QS);
    for (std::size_t j = 0; j < ts.size(); ++j)
        for (std::size_t i = 0; i < rhos.size(); ++i)
            CHECK(std::abs(grid[j * rhos.size() + i] - exact(rhos[i], ts[j])) < 1e-9);
}

TEST_CASE("extension beyond the node budget is refused") {
    const auto one2 = constant_trial(SurfaceId::sphere2);
    CHECK_THROWS_AS(extension_transform(one2, pt({1e5, 0.0, 0.0}), QuadratureSpec::defaults()), std::domain_error);
}

TEST_CASE("two-fold trial convolutions") {
    const auto g = gaussian_trial(SurfaceId::paraboloid2);
    // |eta|^2 + |zeta|^2 = tau on the fiber
    CHECK(trial_convolution(g, 0.7, 1.3, 64) == doctest::Approx(0.5 * pi * std::exp(-1.3)).epsilon(1e-12));
    CHECK(trial_convolution(g, 0.7, 0.2, 64) == 0.0);
    const auto e = exponential_trial(SurfaceId::cone3);
    CHECK(trial_convolution(e, 0.7, 1.3, 16) == doctest::Approx(2.0 * pi * std::exp(-1.3)).epsilon(1e-12));
    const auto h = hyperboloid_trial(1.5);
    const double X = 0.8, tau = 3.1;
    CHECK(trial_convolution(h, X, tau, 64) ==
          doctest::Approx(2.0 * pi / std::sqrt(tau * tau - X * X) * std::exp(-1.5 * tau)).epsilon(1e-10));
}

TEST_CASE("sharp chain is tight for the extremizers") {
    const auto QS = QuadratureSpec::defaults();
    const auto p = sharp_chain(gaussian_trial(SurfaceId::paraboloid2), QS);
    CHECK(p.sup == doctest::Approx(pi / 2));
    CHECK(p.l2_conv_sq.value == doctest::Approx(std::pow(pi, 3) / 8).epsilon(1e-8));
    CHECK(std::abs(p.relative_defect()) < 1e-3);
    CHECK(p.defect.value >= -p.defect.error);

    const auto c = sharp_chain(exponential_trial(SurfaceId::cone3), QS);
    CHECK(c.l2_conv_sq.value == doctest::Approx(2.0 * std::pow(pi, 3)).epsilon(1e-6));
    CHECK(std::abs(c.relative_defect()) < 1e-3);
}

TEST_CASE("sharp chain for the disc indicator is strict") {
    const auto r = sharp_chain(disc_indicator_trial(SurfaceId::paraboloid2), QuadratureSpec::defaults());
    CHECK(r.defect.value > r.defect.error);
    CHECK(r.relative_defect() > 0.01);
}

TEST_CASE("sharp chain input contract") {
    const auto QS = QuadratureSpec::defaults();
    auto signed_trial = tabulated_radial_trial(SurfaceId::paraboloid2, {0.0, 1.0, 2.0}, {1.0, -1.0, 0.0});
    CHECK_THROWS_AS(sharp_chain(signed_trial, QS), std::invalid_argument);
    CHECK_THROWS_AS(sharp_chain(gaussian_trial(SurfaceId::perturbed2), QS), std::invalid_argument);
    TrialFunction nr = gaussian_trial(SurfaceId::paraboloid2);
    nr.radial = nullptr;
    CHECK_THROWS_AS(sharp_chain(nr, QS), std::invalid_argument);
}

TEST_CASE("scaling covariance of paraboloid Gaussians") {
    for (double s : {0.5, 1.0, 2.0}) {
        const auto r = sharp_chain(gaussian_trial(SurfaceId::paraboloid2, s), QuadratureSpec::defaults());
        CHECK(std::abs(r.relative_defect()) < 1e-3);
        CHECK(r.l2_conv_sq.value == doctest::Approx(std::pow(pi, 3) / (8 * s * s)).epsilon(1e-6));
    }
}

TEST_CASE("hyperboloid extremizing sequence") {
    const auto rep = hyperboloid_sequence({1.0, 2.0, 4.0, 8.0}, QuadratureSpec::defaults());
    REQUIRE(rep.phi.size() == 4);
    CHECK(rep.ceiling == doctest::Approx(std::sqrt(pi)));
    CHECK(rep.increasing);
    CHECK(rep.below_ceiling);
    for (std::size_t i = 0; i < rep.a.size(); ++i)
        CHECK(rep.phi[i].value == doctest::Approx(hyperboloid_phi_exact(rep.a[i])).epsilon(1e-5));
    CHECK(rep.phi.back().value > 0.9 * std::sqrt(pi));
    CHECK_THROWS_AS(hyperboloid_sequence({0.5}, QuadratureSpec::defaults()), std::invalid_argument);
}

TEST_CASE("Plancherel ratio is a convention constant") {
    std::vector<double> ratios;
    for (double s : {0.5, 1.0, 2.0}) {
        const auto rep = plancherel_ratio(gaussian_trial(SurfaceId::paraboloid2, s), QuadratureSpec::defaults());
        ratios.push_back(rep.ratio);
        MESSAGE("s = " << s << " ratio = " << rep.ratio);
    }
    for (double r : ratios) CHECK(r == doctest::Approx(ratios.front()).epsilon(1e-2));
    // (2 pi)^3 for the e^{-i x.w} convention
    CHECK(ratios.front() == doctest::Approx(8.0 * std::pow(pi, 3)).epsilon(1e-2));
}

TEST_CASE("functional equation on matched pairs") {
    std::vector<BasePair> pairs2{{base(0.3, -0.2), base(1.1, 0.4)}, {base(-0.9, 0.5), base(0.2, 0.8)},
                                 {base(1.4, 0.0), base(0.0, -0.6)}};
    CHECK(functional_equation_defect(gaussian_trial(SurfaceId::paraboloid2), pairs2) < 1e-10);
    CHECK(functional_equation_defect(quartic_trial(SurfaceId::paraboloid2), pairs2) > 0.01);
    std::vector<BasePair> pairs3{{base(0.3, -0.2, 0.5), base(1.1, 0.4, -0.3)},
                                 {base(-0.9, 0.5, 0.1), base(0.2, 0.8, 0.7)}};
    CHECK(functional_equation_defect(exponential_trial(SurfaceId::cone3), pairs3) < 1e-10);
    CHECK(functional_equation_defect(gaussian_trial(SurfaceId::cone3), pairs3) > 0.01);
    // a repeated point has no distinct partner
    std::vector<BasePair> degenerate{{base(0.5, 0.5), base(0.5, 0.5)}};
    CHECK_THROWS_AS(functional_equation_defect(gaussian_trial(SurfaceId::paraboloid2), degenerate), std::domain_error);
}
