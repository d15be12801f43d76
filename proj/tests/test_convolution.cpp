#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "strichlab/convolution.hpp"
#include "strichlab/errors.hpp"

using namespace strichlab;
using std::numbers::pi;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

const SurfaceMeasure& S(SurfaceId id) { return surface(id); }

}  // namespace

TEST_CASE("closed forms") {
    CHECK(conv2_closed(S(SurfaceId::paraboloid2), pt({0.3, 0.1, 1.0})) == doctest::Approx(pi / 2));
    CHECK(conv2_closed(S(SurfaceId::hyperboloid2), pt({0.0, 0.0, 3.0})) == doctest::Approx(2.0 * pi / 3.0));
    CHECK(conv2_closed(S(SurfaceId::sphere2), pt({1.0, 0.0, 0.0})) == doctest::Approx(2.0 * pi));
    CHECK(conv2_closed(S(SurfaceId::sphere1), pt({1.0, 0.0})) == doctest::Approx(4.0 / std::sqrt(3.0)));
    CHECK(conv2_closed(S(SurfaceId::cone3), pt({0.5, 0.0, 0.0, 2.0})) == doctest::Approx(2.0 * pi));
    CHECK(std::isinf(conv2_closed(S(SurfaceId::sphere2), pt({0.0, 0.0, 0.0}))));
    CHECK(conv2_closed(S(SurfaceId::sphere2), pt({2.5, 0.0, 0.0})) == 0.0);
    CHECK_THROWS_AS(conv2_closed(S(SurfaceId::perturbed2), pt({0.0, 0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("two-fold circle identity") {
    for (double r = 0.05; r < 2.0; r += 0.05) {
        const double v = conv2_closed(S(SurfaceId::sphere1), pt({r, 0.0}));
        CHECK(v * r * std::sqrt(4.0 - r * r) == doctest::Approx(4.0).epsilon(1e-14));
    }
}

TEST_CASE("radiality of sphere convolutions") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (SurfaceId id : {SurfaceId::sphere1, SurfaceId::sphere2}) {
        const auto& s = S(id);
        for (double r : {0.3, 1.1, 1.9}) {
            Point x = Point::Zero(s.ambient_dim);
            x[0] = r;
            const double base = conv2_closed(s, x);
            for (int k = 0; k < 8; ++k) {
                Eigen::MatrixXd A(s.ambient_dim, s.ambient_dim);
                for (int i = 0; i < A.size(); ++i) A.data()[i] = n(rng);
                const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
                // values agree up to the rounding of |Q x|
                CHECK(conv2_closed(s, Q * x) == doctest::Approx(base).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("support consistency") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (SurfaceId id : {SurfaceId::paraboloid2, SurfaceId::cone3, SurfaceId::hyperboloid2, SurfaceId::sphere1,
                         SurfaceId::sphere2}) {
        const auto& s = S(id);
        for (int i = 0; i < 500; ++i) {
            Point p(s.ambient_dim);
            for (int k = 0; k < p.size(); ++k) p[k] = u(rng);
            if (singular_gap(s, p) < 1e-3) continue;
            CHECK((conv2_closed(s, p) == 0.0) == !support_predicate(s, p));
        }
    }
}

TEST_CASE("oracle examples") {
    const auto spec = QuadratureSpec::defaults();
    const auto par = conv2_oracle(S(SurfaceId::paraboloid2), pt({0.0, 0.0, 1.0}), spec);
    CHECK(std::abs(par.value - pi / 2) < 1e-3);
    const auto cone = conv2_oracle(S(SurfaceId::cone3), pt({0.5, 0.0, 0.0, 2.0}), spec);
    CHECK(std::abs(cone.value - 2.0 * pi) < 1e-2);
    const auto out = conv2_oracle(S(SurfaceId::paraboloid2), pt({0.0, 0.0, -1.0}), spec);
    CHECK(out.value == 0.0);
    CHECK_THROWS_AS(conv2_oracle(S(SurfaceId::sphere2), pt({0.01, 0.0, 0.0}), spec), SingularProximity);
}

TEST_CASE("oracle agrees with closed forms off the singular loci") {
    const auto spec = QuadratureSpec::defaults();
    const std::vector<std::pair<SurfaceId, Point>> cases = {
        {SurfaceId::paraboloid2, pt({0.7, -0.4, 1.3})},  {SurfaceId::paraboloid2, pt({1.5, 0.5, 2.0})},
        {SurfaceId::hyperboloid2, pt({0.5, 0.2, 2.6})},  {SurfaceId::hyperboloid2, pt({1.2, -1.0, 4.0})},
        {SurfaceId::cone3, pt({0.0, 0.0, 0.0, 1.0})},    {SurfaceId::cone3, pt({0.3, 0.4, -0.2, 1.5})},
        {SurfaceId::sphere1, pt({0.4, 0.3})},            {SurfaceId::sphere1, pt({1.2, -1.0})},
        {SurfaceId::sphere2, pt({0.2, 0.5, 0.1})},       {SurfaceId::sphere2, pt({1.0, 0.9, -0.3})},
    };
    for (const auto& [id, p] : cases) {
        const double closed = conv2_closed(S(id), p);
        const auto o = conv2_oracle(S(id), p, spec);
        INFO(to_string(id) << " closed=" << closed << " oracle=" << o.value << " err=" << o.error);
        CHECK(std::abs(o.value - closed) <= std::max(1e-3, 3.0 * o.error));
        CHECK(std::abs(o.value - closed) < 1e-2 * closed);
    }
}

TEST_CASE("triple sphere convolution") {
    CHECK(conv3_sphere2(0.5) == doctest::Approx(8.0 * pi * pi));
    CHECK(conv3_sphere2(2.0) == doctest::Approx(2.0 * pi * pi));
    CHECK(conv3_sphere2(3.0) == 0.0);
    CHECK(conv3_sphere2(1.0) == doctest::Approx(4.0 * pi * pi * 2.0));
    auto spec = QuadratureSpec::defaults();
    spec.samples = 1'000'000;
    const auto mc = conv3_monte_carlo(3, 1.5, 0.05, spec);
    CHECK(std::abs(mc.value - conv3_sphere2(1.5)) < 0.03 * conv3_sphere2(1.5));
}

TEST_CASE("triple circle convolution") {
    const auto spec = QuadratureSpec::defaults();
    CHECK(conv3_circle(3.5, spec).value == 0.0);
    CHECK(conv3_circle(3.0, spec).value == 0.0);
    CHECK(std::isinf(conv3_circle(1.0, spec).value));
    // at the origin |xi - omega| = 1 for every omega, so the value is 2 pi * 4 / sqrt(3)
    const auto zero = conv3_circle(0.0, spec);
    CHECK(zero.value == doctest::Approx(8.0 * pi / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(conv3_circle(0.99, spec).value > conv3_circle(0.9, spec).value);
    CHECK(conv3_circle(0.99, spec).near_singular);
    double prev = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double r = 0.8 + 0.19 * i / 9.0;
        const double v = conv3_circle(r, spec).value;
        CHECK(v > prev);
        prev = v;
    }
    auto mcspec = spec;
    mcspec.samples = 2'000'000;
    for (double r : {0.0, 0.5, 2.0, 2.5}) {
        const auto q = conv3_circle(r, spec);
        const auto mc = conv3_monte_carlo(2, r, 0.03, mcspec);
        INFO("r=" << r << " quad=" << q.value << " mc=" << mc.value << " +- " << mc.error);
        CHECK(std::abs(mc.value - q.value) < 0.03 * q.value);
        CHECK(q.error < 1e-8 * q.value);
    }
}

TEST_CASE("monte carlo is reproducible") {
    auto spec = QuadratureSpec::defaults();
    spec.samples = 100'000;
    const auto a = conv3_monte_carlo(2, 0.7, 0.05, spec);
    const auto b = conv3_monte_carlo(2, 0.7, 0.05, spec);
    CHECK(a.value == b.value);
    spec.seed += 1;
    CHECK(conv3_monte_carlo(2, 0.7, 0.05, spec).value != a.value);
}

TEST_CASE("comparison principle") {
    const auto spec = QuadratureSpec::defaults();
    CHECK(comparison_check({0.5, 0.0}, 0.2, spec).strict);
    CHECK(comparison_check({0.0, 0.0}, 1.0, spec).lhs <= pi / 2);
    CHECK(comparison_check({2.0, 0.0}, 0.5, spec).strict);
    // at xi = 0 the level set is a circle and the value is 2 pi / (4 + 8 rho^2)
    const double rho2 = (std::sqrt(3.0) - 1.0) / 2.0;
    CHECK(comparison_check({0.0, 0.0}, 1.0, spec).lhs == doctest::Approx(2.0 * pi / (4.0 + 8.0 * rho2)).epsilon(1e-4));
}
