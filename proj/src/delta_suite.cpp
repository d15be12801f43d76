#include <cmath>
#include <numbers>

#include "strichlab/delta_geometry.hpp"

namespace strichlab {

namespace {

using std::numbers::pi;

ImplicitMap unit_circle() {
    ImplicitMap m = scalar_map(2, [](const Point& x) { return x.norm() - 1.0; });
    m.jacobian = [](const Point& x) -> Eigen::MatrixXd { return (x / x.norm()).transpose(); };
    return m;
}

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

double smooth_bump(double u) { return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 4) : 0.0; }

SuiteCheck make(std::string name, const CheckResult& r, bool monotone = true) {
    return {std::move(name), r, r.residual / std::max(1.0, std::abs(r.rhs)), monotone};
}

}  // namespace

std::vector<SuiteCheck> delta_calculus_suite(const QuadratureSpec& spec) {
    std::vector<SuiteCheck> out;
    const Box sq{Axis{-1.5, 1.5}, Axis{-1.5, 1.5}};
    const auto one = [](const Point&) { return 1.0; };
    const auto circle = unit_circle();

    const auto length = delta_integral(circle, one, sq, spec);
    out.push_back(make("circle_length", {length.value, 2.0 * pi, std::abs(length.value - 2.0 * pi), length.error},
                       length.monotone_increments()));
    out.push_back(make("scalar_rescale",
                       scalar_rescale_check(circle, [](const Point& x) { return x.norm() + 1.0; }, one, sq, spec)));
    out.push_back(make("change_of_variables_dilation",
                       change_of_variables_check(circle, [](const Point& y) -> Point { return 2.0 * y; }, one, sq,
                                                 Box{Axis{-0.75, 0.75}, Axis{-0.75, 0.75}}, spec)));
    const Eigen::Matrix2d R = Eigen::Rotation2Dd(0.7).toRotationMatrix();
    const TestFunction phi = [](const Point& x) { return smooth_bump(x.norm() / 1.4) * (2.0 + x[0]); };
    out.push_back(make("change_of_variables_rotation",
                       change_of_variables_check(circle, [R](const Point& y) -> Point { return R * y; }, phi, sq, sq,
                                                 spec)));
    const TestFunction cone_phi = [](const Point& x) { return smooth_bump((x[0] - 0.9) / 0.6) * (1.0 + 0.3 * x[1]); };
    out.push_back(make("null_cone", null_cone_check(1, cone_phi, Box{Axis{0.25, 1.55}, Axis{-1.6, 1.6}}, spec)));

    for (double r : {0.5, 1.0, 1.5}) {
        const Eigen::Vector3d x(r, 0.0, 0.0);
        const auto h = [](const Eigen::Vector3d& y) { return 1.0 + 0.3 * y[1] + 0.2 * y[0] * y[2]; };
        const TestFunction prod = [&](const Point& y) { return h(y) * h(x - Eigen::Vector3d(y)); };
        const Box box{Axis{r - 1.2, 1.2}, Axis{-1.2, 1.2}, Axis{-1.2, 1.2}};
        const auto molli = delta_integral(gamma_pair(x), prod, box, spec);
        // Gamma_x is the circle of radius rho in the plane y_0 = r / 2 and J = r rho on it
        const double rho = std::sqrt(1.0 - r * r / 4.0);
        const Rule th = periodic_trapezoid(64, 2.0 * pi);
        const double param = th.integrate([&](double t) {
            Point y(3);
            y << r / 2.0, rho * std::cos(t), rho * std::sin(t);
            return prod(y) / r;
        });
        char name[48];
        std::snprintf(name, sizeof name, "product_rule_gamma_x_r%.1f", r);
        out.push_back(make(name, {molli.value, param, std::abs(molli.value - param), molli.error},
                           molli.monotone_increments()));
    }
    return out;
}

}  // namespace strichlab
