#include <cmath>
#include <numbers>

#include "doctest.h"
#include "strichlab/delta_geometry.hpp"
#include "strichlab/errors.hpp"
#include "strichlab/quadrature.hpp"

using namespace strichlab;
using std::numbers::pi;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

ImplicitMap unit_sphere(int d) {
    ImplicitMap m = scalar_map(d, [](const Point& x) { return x.norm() - 1.0; });
    m.jacobian = [](const Point& x) -> Eigen::MatrixXd { return (x / x.norm()).transpose(); };
    return m;
}

// (|y| - 1, |x - y| - 1) on R^3; zero set is the circle Gamma_x
ImplicitMap gamma_pair(const Eigen::Vector3d& x) {
    ImplicitMap m;
    m.ambient_dim = 3;
    m.codim = 2;
    m.eval = [x](const Point& y) {
        Eigen::VectorXd v(2);
        v << y.norm() - 1.0, (x - y).norm() - 1.0;
        return v;
    };
    m.jacobian = [x](const Point& y) {
        Eigen::MatrixXd J(2, 3);
        J.row(0) = (y / y.norm()).transpose();
        J.row(1) = ((y - x) / (y - x).norm()).transpose();
        return J;
    };
    return m;
}

Box square(double half, int d) { return Box(d, Axis{-half, half}); }

// smooth bump on |u| < 1
double smooth_bump(double u) { return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 4) : 0.0; }

}  // namespace

TEST_CASE("jacobian_factor examples") {
    CHECK(jacobian_factor(unit_sphere(3), pt({0.0, 0.6, 0.8})) == doctest::Approx(1.0));
    const ImplicitMap sq = scalar_map(2, [](const Point& x) { return x.squaredNorm() - 1.0; });
    CHECK(jacobian_factor(sq, pt({1.0, 0.0})) == doctest::Approx(2.0).epsilon(1e-8));
    for (double r : {0.5, 1.0, 1.5}) {
        const Eigen::Vector3d x(r, 0.0, 0.0);
        const double rho = std::sqrt(1.0 - r * r / 4.0);
        const Point y = pt({r / 2.0, rho * std::cos(0.3), rho * std::sin(0.3)});
        CHECK(jacobian_factor(gamma_pair(x), y) == doctest::Approx(r * rho).epsilon(1e-12));
    }
    CHECK_THROWS_AS(jacobian_factor(sq, pt({0.0, 0.0})), DegenerateGeometry);
}

TEST_CASE("bump profiles have unit mass") {
    for (auto prof : {BumpProfile::polynomial, BumpProfile::cosine}) {
        const Rule r = gauss_legendre(60, -1.0, 1.0);
        CHECK(std::abs(r.integrate([&](double x) { return bump(prof, x); }) - 1.0) < 1e-10);
        CHECK(bump(prof, 1.0) == 0.0);
        CHECK(bump(prof, 0.2) > 0.0);
    }
}

TEST_CASE("circle length and quadratic level set") {
    const auto spec = QuadratureSpec::defaults();
    const auto one = [](const Point&) { return 1.0; };
    const auto circ = delta_integral(unit_sphere(2), one, square(1.5, 2), spec);
    CHECK(std::abs(circ.value - 2.0 * pi) < 1e-6);
    CHECK(circ.error < 1e-4);
    CHECK(circ.monotone_increments());
    const auto sq = delta_integral(scalar_map(2, [](const Point& x) { return x.squaredNorm() - 1.0; }), one,
                                   square(1.5, 2), spec);
    CHECK(std::abs(sq.value - pi) < 1e-6);
    CHECK(sq.monotone_increments());
}

TEST_CASE("mollifier profiles agree within reported error") {
    const auto spec = QuadratureSpec::defaults();
    const TestFunction phi = [](const Point& x) { return 1.0 + 0.5 * x[0] * x[0] + 0.2 * std::sin(2.0 * x[1]) * std::exp(0.3 * x[0]); };
    const std::vector<ImplicitMap> cases = {
        unit_sphere(2),
        scalar_map(2, [](const Point& x) { return x.squaredNorm() - 1.0; }),
        scalar_map(2, [](const Point& x) { return x[0] * x[0] / 1.44 + x[1] * x[1] / 0.64 - 1.0; }),
    };
    for (const auto& f : cases) {
        const auto a = delta_integral(f, phi, square(1.6, 2), spec, BumpProfile::polynomial);
        const auto b = delta_integral(f, phi, square(1.6, 2), spec, BumpProfile::cosine);
        INFO("poly " << a.raw[0] << " " << a.raw[1] << " " << a.raw[2] << " " << a.raw[3] << " err " << a.error);
        INFO("cos " << b.raw[0] << " " << b.raw[1] << " " << b.raw[2] << " " << b.raw[3] << " err " << b.error);
        CHECK(std::abs(a.value - b.value) <= 2.0 * std::max(a.error, b.error));
        CHECK(a.monotone_increments());
        CHECK(b.monotone_increments());
    }
}

TEST_CASE("product rule on Gamma_x") {
    auto spec = QuadratureSpec::defaults();
    for (double r : {0.5, 1.0, 1.5}) {
        const Eigen::Vector3d x(r, 0.0, 0.0);
        const auto h = [](const Eigen::Vector3d& y) { return 1.0 + 0.3 * y[1] + 0.2 * y[0] * y[2]; };
        const TestFunction phi = [&](const Point& y) { return h(y) * h(x - Eigen::Vector3d(y)); };
        Box box = {Axis{r - 1.2, 1.2}, Axis{-1.2, 1.2}, Axis{-1.2, 1.2}};
        const auto molli = delta_integral(gamma_pair(x), phi, box, spec);
        // parametrized circle of radius rho in the plane y_0 = r / 2
        const double rho = std::sqrt(1.0 - r * r / 4.0);
        const double J = r * rho;
        const Rule th = periodic_trapezoid(64, 2.0 * pi);
        const double param = th.integrate([&](double t) {
            const Point y = pt({r / 2.0, rho * std::cos(t), rho * std::sin(t)});
            return phi(y) / J * rho;
        });
        INFO("r=" << r << " mollified=" << molli.value << " param=" << param);
        CHECK(std::abs(molli.value - param) < 1e-4 * std::abs(param));
        CHECK(molli.monotone_increments());
    }
    // phi = 1 reproduces the two-fold sphere convolution 2 pi / |x|
    const Eigen::Vector3d x(1.0, 0.0, 0.0);
    const auto one = delta_integral(gamma_pair(x), [](const Point&) { return 1.0; },
                                    Box{Axis{-0.2, 1.2}, Axis{-1.2, 1.2}, Axis{-1.2, 1.2}}, spec);
    CHECK(std::abs(one.value - 2.0 * pi) < 1e-4);
}

TEST_CASE("scalar rescaling") {
    const auto spec = QuadratureSpec::defaults();
    const auto one = [](const Point&) { return 1.0; };
    const auto res = scalar_rescale_check(unit_sphere(2), [](const Point& x) { return x.norm() + 1.0; }, one,
                                          square(1.5, 2), spec);
    CHECK(res.residual < 1e-4);
    CHECK(res.lhs == doctest::Approx(pi).epsilon(1e-6));
    const auto ident = scalar_rescale_check(unit_sphere(2), [](const Point&) { return 1.0; }, one,
                                            square(1.5, 2), spec);
    CHECK(ident.residual < 1e-12);
}

TEST_CASE("null cone identity") {
    const auto spec = QuadratureSpec::defaults();
    const TestFunction phi = [](const Point& x) {
        return smooth_bump((x[0] - 0.9) / 0.6) * (1.0 + 0.3 * x[1]);
    };
    Box box = {Axis{0.25, 1.55}, Axis{-1.6, 1.6}};
    const auto res = null_cone_check(1, phi, box, spec);
    CHECK(res.residual < 1e-4);
    CHECK(res.lhs > 0.1);
}

TEST_CASE("change of variables") {
    const auto spec = QuadratureSpec::defaults();
    const auto one = [](const Point&) { return 1.0; };
    const auto f = unit_sphere(2);
    const auto ident = change_of_variables_check(f, [](const Point& y) { return y; }, one, square(1.5, 2),
                                                 square(1.5, 2), spec);
    CHECK(ident.residual < 1e-9);
    const auto dil = change_of_variables_check(f, [](const Point& y) -> Point { return 2.0 * y; }, one,
                                               square(1.5, 2), square(0.75, 2), spec);
    CHECK(dil.residual < 1e-4);
    CHECK(dil.rhs == doctest::Approx(2.0 * pi).epsilon(1e-6));
    const Eigen::Matrix2d R = Eigen::Rotation2Dd(0.7).toRotationMatrix();
    const TestFunction phi = [](const Point& x) { return smooth_bump(x.norm() / 1.4) * (2.0 + x[0]); };
    const auto rot = change_of_variables_check(f, [R](const Point& y) -> Point { return R * y; }, phi,
                                               square(1.5, 2), square(1.5, 2), spec);
    CHECK(rot.residual < 1e-4);
}

TEST_CASE("tangential level sets are reported") {
    ImplicitMap tangent;
    tangent.ambient_dim = 2;
    tangent.codim = 2;
    tangent.eval = [](const Point& x) {
        Eigen::VectorXd v(2);
        v << x[1], x[1] - x[0] * x[0];
        return v;
    };
    CHECK_THROWS_AS(delta_integral(tangent, [](const Point&) { return 1.0; }, square(1.0, 2),
                                   QuadratureSpec::defaults()),
                    ContractViolation);
}

TEST_CASE("divergence theorem regression") {
    // V(x) = x b(|x|) with b compactly supported; Omega_- is the unit disc
    const auto b = [](double r) { return smooth_bump(r / 1.8); };
    const auto db = [](double r) {
        const double u = r / 1.8;
        return std::abs(u) < 1.0 ? 4.0 * std::pow(1.0 - u * u, 3) * (-2.0 * u) / 1.8 : 0.0;
    };
    // div V = 2 b + r b'; integrate over the disc in polar coordinates
    const Rule rr = gauss_legendre(40, 0.0, 1.0);
    const double volume = 2.0 * pi * rr.integrate([&](double r) { return (2.0 * b(r) + r * db(r)) * r; });
    const TestFunction flux = [&](const Point& x) { return b(x.norm()) * x.squaredNorm() / x.norm(); };
    const auto surface = delta_integral(unit_sphere(2), flux, square(1.9, 2), QuadratureSpec::defaults());
    CHECK(std::abs(volume - surface.value) < 1e-6);
}
