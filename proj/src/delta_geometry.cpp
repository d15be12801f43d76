#include "strichlab/delta_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "strichlab/errors.hpp"
#include "strichlab/parallel.hpp"

namespace strichlab {

Eigen::MatrixXd ImplicitMap::jac(const Point& x) const {
    if (jacobian) return jacobian(x);
    Eigen::MatrixXd J(codim, ambient_dim);
    Point y = x;
    for (int k = 0; k < ambient_dim; ++k) {
        const double h = 1e-6 * (1.0 + std::abs(x[k]));
        y[k] = x[k] + h;
        const Eigen::VectorXd fp = eval(y);
        y[k] = x[k] - h;
        const Eigen::VectorXd fm = eval(y);
        y[k] = x[k];
        J.col(k) = (fp - fm) / (2.0 * h);
    }
    return J;
}

ImplicitMap scalar_map(int dim, std::function<double(const Point&)> f) {
    ImplicitMap m;
    m.ambient_dim = dim;
    m.codim = 1;
    m.eval = [f = std::move(f)](const Point& x) {
        Eigen::VectorXd v(1);
        v[0] = f(x);
        return v;
    };
    return m;
}

namespace {

double smallest_singular_value(const Eigen::MatrixXd& J) {
    if (J.rows() == 1) return J.norm();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    return svd.singularValues().minCoeff();
}

double gram_root(const Eigen::MatrixXd& J) {
    if (J.rows() == 1) return J.norm();
    return std::sqrt(std::max(0.0, (J * J.transpose()).determinant()));
}

}  // namespace

double jacobian_factor(const ImplicitMap& f, const Point& x) {
    const Eigen::MatrixXd J = f.jac(x);
    if (smallest_singular_value(J) < 1e-8)
        throw DegenerateGeometry("jacobian_factor: Jacobian is rank deficient at the given point");
    return gram_root(J);
}

double bump(BumpProfile profile, double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    switch (profile) {
        case BumpProfile::polynomial: {
            // int_{-1}^{1} (1 - x^2)^8 dx = 2^17 (8!)^2 / 17!
            static const double c = std::tgamma(18.0) / (std::ldexp(1.0, 17) * std::pow(std::tgamma(9.0), 2));
            const double u = 1.0 - x * x;
            const double u2 = u * u, u4 = u2 * u2;
            return c * u4 * u4;
        }
        case BumpProfile::cosine: {
            // int_{-1}^{1} cos^10(pi x / 2) dx = 2 * C(10, 5) / 2^10
            constexpr double c = 1024.0 / 504.0;
            const double v = std::cos(0.5 * std::numbers::pi * x);
            const double v2 = v * v, v4 = v2 * v2;
            return c * v4 * v4 * v2;
        }
    }
    return 0.0;
}

double Mollifier::operator()(const Eigen::VectorXd& s) const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        v *= bump(profile, s[i] / width) / width;
        if (v == 0.0) return 0.0;
    }
    return v;
}

bool DeltaResult::monotone_increments() const {
    // increments already at rounding level count as converged
    const double floor = 1e-11 * std::max(std::abs(value), 1e-300);
    for (std::size_t j = 1; j < increments.size(); ++j)
        if (!(increments[j] < increments[j - 1]) && increments[j] > floor) return false;
    return true;
}

namespace {

struct BandIntegral {
    double value = 0.0;
    long long cells = 0;
    double min_sigma = std::numeric_limits<double>::infinity();
};

struct GridPlan {
    std::vector<int> refinable;      // axis indices that are subdivided
    std::vector<int> base_counts;    // cells per axis at level 0 (all axes)
    int levels = 0;
    Eigen::VectorXd gradient_bound;  // per component of f
};

GridPlan plan_grid(const ImplicitMap& f, const Box& box, double eps, int cells_across) {
    const int d = static_cast<int>(box.size());
    if (d != f.ambient_dim) throw std::invalid_argument("delta_integral: box dimension mismatch");
    if (cells_across < 4) throw std::invalid_argument("delta_integral: cells_across too small");
    GridPlan plan;
    for (int a = 0; a < d; ++a) {
        if (!(box[a].hi > box[a].lo)) throw std::invalid_argument("delta_integral: empty box axis");
        if (box[a].fixed_cells == 0) plan.refinable.push_back(a);
    }
    const int nr = static_cast<int>(plan.refinable.size());

    // Lipschitz bounds of each component over the refinable coordinates,
    // sampled on a tensor grid and inflated.
    int per_axis = nr == 0 ? 1 : static_cast<int>(std::pow(20000.0, 1.0 / nr));
    per_axis = std::clamp(per_axis, 4, 48);
    plan.gradient_bound = Eigen::VectorXd::Zero(f.codim);
    std::vector<int> counts(d);
    long long total = 1;
    for (int a = 0; a < d; ++a) {
        counts[a] = box[a].fixed_cells > 0 ? box[a].fixed_cells : per_axis;
        total *= counts[a];
    }
    // first pass: global Lipschitz bounds used for pruning
    std::vector<Point> samples;
    std::vector<Eigen::VectorXd> values;
    std::vector<Eigen::VectorXd> row_norms;
    samples.reserve(total);
    Point x(d);
    for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        for (int a = 0; a < d; ++a) {
            const int i = static_cast<int>(rest % counts[a]);
            rest /= counts[a];
            x[a] = box[a].lo + (box[a].hi - box[a].lo) * (i + 0.5) / counts[a];
        }
        const Eigen::MatrixXd J = f.jac(x);
        Eigen::VectorXd norms(f.codim);
        for (int c = 0; c < f.codim; ++c) {
            double g2 = 0.0;
            for (int a : plan.refinable) g2 += J(c, a) * J(c, a);
            norms[c] = std::sqrt(g2);
            plan.gradient_bound[c] = std::max(plan.gradient_bound[c], norms[c]);
        }
        samples.push_back(x);
        values.push_back(f.eval(x));
        row_norms.push_back(norms);
    }
    plan.gradient_bound = (1.25 * plan.gradient_bound).cwiseMax(1e-12);

    // second pass: steepest slope among sample cells that may meet the band;
    // this sets the resolution, while pruning keeps the global bound
    double sample_rho2 = 0.0;
    for (int a : plan.refinable) {
        const double hw = 0.5 * (box[a].hi - box[a].lo) / counts[a];
        sample_rho2 += hw * hw;
    }
    const double sample_rho = std::sqrt(sample_rho2);
    double band_slope = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        bool near = true;
        for (int c = 0; c < f.codim; ++c)
            if (std::abs(values[k][c]) > eps + 1.5 * plan.gradient_bound[c] * sample_rho) near = false;
        if (near) band_slope = std::max(band_slope, row_norms[k].maxCoeff());
    }
    if (band_slope == 0.0) band_slope = plan.gradient_bound.maxCoeff() / 1.25;
    band_slope = std::max(1.25 * band_slope, 1e-12);

    // finest spacing so that cells_across cells span the band of the steepest component
    const double h_target = 2.0 * eps / (cells_across * band_slope);
    long long nmax = 1;
    std::vector<long long> fine(d, 1);
    for (int a : plan.refinable) {
        fine[a] = static_cast<long long>(std::ceil((box[a].hi - box[a].lo) / h_target));
        nmax = std::max(nmax, fine[a]);
    }
    plan.levels = 0;
    while ((nmax >> plan.levels) > 16) ++plan.levels;
    plan.base_counts.resize(d);
    for (int a = 0; a < d; ++a) {
        if (box[a].fixed_cells > 0) {
            plan.base_counts[a] = box[a].fixed_cells;
        } else {
            const long long step = 1LL << plan.levels;
            plan.base_counts[a] = static_cast<int>(std::max<long long>(1, (fine[a] + step - 1) / step));
        }
    }
    return plan;
}

struct BandWalker {
    const ImplicitMap& f;
    const TestFunction& phi;
    const Box& box;
    const GridPlan& plan;
    Mollifier moll;
    bool track_rank;

    void visit(Point& center, std::vector<double>& half, int level, BandIntegral& acc) const {
        const Eigen::VectorXd F = f.eval(center);
        if (level < plan.levels) {
            double rho2 = 0.0;
            for (int a : plan.refinable) rho2 += half[a] * half[a];
            const double rho = std::sqrt(rho2);
            for (int c = 0; c < f.codim; ++c)
                if (std::abs(F[c]) > moll.width + 1.5 * plan.gradient_bound[c] * rho) return;
            const int nr = static_cast<int>(plan.refinable.size());
            const Point saved = center;
            for (int a : plan.refinable) half[a] *= 0.5;
            for (int mask = 0; mask < (1 << nr); ++mask) {
                for (int r = 0; r < nr; ++r) {
                    const int a = plan.refinable[r];
                    center[a] = saved[a] + ((mask >> r) & 1 ? half[a] : -half[a]);
                }
                visit(center, half, level + 1, acc);
            }
            center = saved;
            for (int a : plan.refinable) half[a] *= 2.0;
            return;
        }
        ++acc.cells;
        const double g = moll(F);
        if (g == 0.0) return;
        double vol = 1.0;
        for (std::size_t a = 0; a < half.size(); ++a) vol *= 2.0 * half[a];
        acc.value += g * phi(center) * vol;
        if (track_rank) acc.min_sigma = std::min(acc.min_sigma, smallest_singular_value(f.jac(center)));
    }
};

BandIntegral band_integral(const ImplicitMap& f, const TestFunction& phi, const Box& box, double eps,
                           int cells_across, BumpProfile profile, bool track_rank) {
    const GridPlan plan = plan_grid(f, box, eps, cells_across);
    const int d = static_cast<int>(box.size());
    long long nbase = 1;
    for (int a = 0; a < d; ++a) nbase *= plan.base_counts[a];
    const BandWalker walker{f, phi, box, plan, Mollifier{eps, profile}, track_rank};
    const auto parts = parallel_map<BandIntegral>(static_cast<std::size_t>(nbase), [&](std::size_t idx) {
        Point center(d);
        std::vector<double> half(d);
        long long rest = static_cast<long long>(idx);
        for (int a = 0; a < d; ++a) {
            const int i = static_cast<int>(rest % plan.base_counts[a]);
            rest /= plan.base_counts[a];
            const double w = (box[a].hi - box[a].lo) / plan.base_counts[a];
            center[a] = box[a].lo + (i + 0.5) * w;
            half[a] = 0.5 * w;
        }
        BandIntegral acc;
        walker.visit(center, half, 0, acc);
        return acc;
    });
    BandIntegral total;
    for (const auto& p : parts) {
        total.value += p.value;
        total.cells += p.cells;
        total.min_sigma = std::min(total.min_sigma, p.min_sigma);
    }
    return total;
}

double default_eps0(const Box& box) {
    double side = 0.0;
    for (const auto& ax : box)
        if (ax.fixed_cells == 0) side = std::max(side, ax.hi - ax.lo);
    return side / 50.0;
}

}  // namespace

double mollified_integral(const ImplicitMap& f, const TestFunction& phi, const Box& box, double eps,
                          int cells_across, BumpProfile profile) {
    return band_integral(f, phi, box, eps, cells_across, profile, false).value;
}

DeltaResult delta_integral(const ImplicitMap& f, const TestFunction& phi, const Box& box,
                           const QuadratureSpec& spec, BumpProfile profile) {
    if (spec.halvings < 1) throw std::invalid_argument("delta_integral: need at least one halving");
    if (spec.cells_across < 8) throw std::invalid_argument("delta_integral: cells_across must be >= 8");
    DeltaResult res;
    const double eps0 = spec.eps0 > 0.0 ? spec.eps0 : default_eps0(box);
    for (int j = 0; j <= spec.halvings; ++j) {
        const double eps = std::ldexp(eps0, -j);
        const BandIntegral b = band_integral(f, phi, box, eps, spec.cells_across, profile, j == 0);
        if (j == 0 && b.min_sigma < 1e-8)
            throw DegenerateGeometry("delta_integral: Jacobian loses rank inside the mollified band");
        res.widths.push_back(eps);
        res.raw.push_back(b.value);
        res.cells = b.cells;
    }
    const int H = spec.halvings;
    for (int j = 0; j < H; ++j) res.increments.push_back(std::abs(res.raw[j + 1] - res.raw[j]));
    std::vector<double> rich;
    for (int j = 0; j < H; ++j) rich.push_back((4.0 * res.raw[j + 1] - res.raw[j]) / 3.0);
    res.value = rich.back();
    const double eps_error = H >= 2 ? std::abs(rich[H - 1] - rich[H - 2]) : res.increments.back();

    const int coarse_cells = std::max(6, (3 * spec.cells_across + 3) / 4);
    const double coarse =
        band_integral(f, phi, box, res.widths.back(), coarse_cells, profile, false).value;
    res.quadrature_error = std::abs(coarse - res.raw.back());
    const double scale = std::max({std::abs(res.value), std::abs(res.raw.front()), 1e-300});
    res.error = eps_error + res.quadrature_error + 1e-13 * scale;

    const bool growing = H >= 2 && res.increments[H - 1] > 1.2 * res.increments[H - 2] &&
                         res.increments[H - 1] > 1e-6 * scale;
    if (eps_error > 1e-2 * std::abs(res.value) + 1e-10 || growing) {
        std::ostringstream msg;
        msg << "delta_integral: mollified values did not settle (";
        for (double v : res.raw) msg << ' ' << v;
        msg << " ); level set may be tangential or degenerate";
        throw NonConvergence(msg.str());
    }
    return res;
}

CheckResult scalar_rescale_check(const ImplicitMap& f, const std::function<double(const Point&)>& alpha,
                                 const TestFunction& phi, const Box& box, const QuadratureSpec& spec) {
    ImplicitMap scaled = f;
    scaled.jacobian = nullptr;
    scaled.eval = [&f, &alpha](const Point& x) -> Eigen::VectorXd { return alpha(x) * f.eval(x); };
    if (f.jacobian) {
        // D(alpha f) = alpha Df on the zero set; off it the product rule term matters
        scaled.jacobian = [&f, &alpha](const Point& x) -> Eigen::MatrixXd {
            Eigen::MatrixXd J = alpha(x) * f.jac(x);
            const Eigen::VectorXd v = f.eval(x);
            const int d = static_cast<int>(x.size());
            Point y = x;
            Eigen::RowVectorXd grad(d);
            for (int k = 0; k < d; ++k) {
                const double h = 1e-6 * (1.0 + std::abs(x[k]));
                y[k] = x[k] + h;
                const double ap = alpha(y);
                y[k] = x[k] - h;
                const double am = alpha(y);
                y[k] = x[k];
                grad[k] = (ap - am) / (2.0 * h);
            }
            return J + v * grad;
        };
    }
    const int c = f.codim;
    const auto lhs = delta_integral(scaled, phi, box, spec);
    const auto rhs = delta_integral(
        f, [&](const Point& x) { return std::pow(alpha(x), -c) * phi(x); }, box, spec);
    return {lhs.value, rhs.value, std::abs(lhs.value - rhs.value), lhs.error + rhs.error};
}

CheckResult null_cone_check(int spatial_dim, const TestFunction& phi, const Box& box,
                            const QuadratureSpec& spec) {
    const int d = spatial_dim + 1;
    auto spatial_norm = [](const Point& x) { return x.tail(x.size() - 1).norm(); };
    ImplicitMap cone;
    cone.ambient_dim = d;
    cone.eval = [&](const Point& x) {
        Eigen::VectorXd v(1);
        v[0] = x[0] * x[0] - x.tail(x.size() - 1).squaredNorm();
        return v;
    };
    cone.jacobian = [](const Point& x) {
        Eigen::MatrixXd J(1, x.size());
        J(0, 0) = 2.0 * x[0];
        for (Eigen::Index k = 1; k < x.size(); ++k) J(0, k) = -2.0 * x[k];
        return J;
    };
    auto sheet = [&](double sign) {
        ImplicitMap m;
        m.ambient_dim = d;
        m.eval = [&, sign](const Point& x) {
            Eigen::VectorXd v(1);
            v[0] = x[0] - sign * spatial_norm(x);
            return v;
        };
        m.jacobian = [&, sign](const Point& x) {
            Eigen::MatrixXd J(1, x.size());
            J(0, 0) = 1.0;
            const double r = spatial_norm(x);
            for (Eigen::Index k = 1; k < x.size(); ++k) J(0, k) = r > 0.0 ? -sign * x[k] / r : 0.0;
            return J;
        };
        return m;
    };
    const TestFunction weighted = [&](const Point& x) { return phi(x) / (2.0 * spatial_norm(x)); };
    const auto lhs = delta_integral(cone, phi, box, spec);
    double rhs = 0.0, err = lhs.error;
    for (double sign : {1.0, -1.0}) {
        // a sheet that misses the box contributes nothing
        bool meets = false;
        for (double t : {box[0].lo, box[0].hi}) meets = meets || (sign * t > 0.0);
        if (!meets) continue;
        const auto part = delta_integral(sheet(sign), weighted, box, spec);
        rhs += part.value;
        err += part.error;
    }
    return {lhs.value, rhs, std::abs(lhs.value - rhs), err};
}

CheckResult change_of_variables_check(const ImplicitMap& f, const std::function<Point(const Point&)>& psi,
                                      const TestFunction& phi, const Box& box, const Box& preimage,
                                      const QuadratureSpec& spec) {
    const int d = f.ambient_dim;
    auto dpsi = [&psi, d](const Point& y) {
        Eigen::MatrixXd D(d, d);
        Point z = y;
        for (int k = 0; k < d; ++k) {
            const double h = 1e-6 * (1.0 + std::abs(y[k]));
            z[k] = y[k] + h;
            const Point p = psi(z);
            z[k] = y[k] - h;
            const Point m = psi(z);
            z[k] = y[k];
            D.col(k) = (p - m) / (2.0 * h);
        }
        return D;
    };
    auto inside = [&box](const Point& x) {
        for (std::size_t a = 0; a < box.size(); ++a)
            if (!box[a].periodic && (x[a] < box[a].lo || x[a] > box[a].hi)) return false;
        return true;
    };
    ImplicitMap pulled;
    pulled.ambient_dim = d;
    pulled.codim = f.codim;
    pulled.eval = [&](const Point& y) { return f.eval(psi(y)); };
    pulled.jacobian = [&](const Point& y) -> Eigen::MatrixXd { return f.jac(psi(y)) * dpsi(y); };
    const TestFunction pulled_phi = [&](const Point& y) {
        const Point x = psi(y);
        if (!inside(x)) return 0.0;
        return phi(x) * std::abs(dpsi(y).determinant());
    };
    const auto lhs = delta_integral(f, phi, box, spec);
    const auto rhs = delta_integral(pulled, pulled_phi, preimage, spec);
    return {lhs.value, rhs.value, std::abs(lhs.value - rhs.value), lhs.error + rhs.error};
}

}  // namespace strichlab
