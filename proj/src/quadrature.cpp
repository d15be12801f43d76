#include "strichlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace strichlab {

namespace {

Rule compute_gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.weights[i] = w;
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(compute_gauss_legendre(n));
    return *slot;
}

Rule gauss_legendre(int n, double a, double b) {
    const Rule& ref = gauss_legendre(n);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * ref.nodes[i];
        r.weights[i] = half * ref.weights[i];
    }
    return r;
}

Rule composite_gauss(double a, double b, int panels, int order) {
    if (panels < 1) throw std::invalid_argument("composite_gauss: panels must be positive");
    const Rule& ref = gauss_legendre(order);
    Rule r;
    r.nodes.reserve(static_cast<std::size_t>(panels) * order);
    r.weights.reserve(r.nodes.capacity());
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            r.nodes.push_back(lo + 0.5 * h * (ref.nodes[i] + 1.0));
            r.weights.push_back(0.5 * h * ref.weights[i]);
        }
    }
    return r;
}

Rule periodic_trapezoid(int n, double period, double shift) {
    if (n < 1) throw std::invalid_argument("periodic_trapezoid: n must be positive");
    Rule r;
    r.nodes.resize(n);
    r.weights.assign(n, period / n);
    for (int i = 0; i < n; ++i) r.nodes[i] = shift + period * i / n;
    return r;
}

EndpointRule tanh_sinh(double a, double b, int level) {
    EndpointRule r;
    r.lo = a;
    r.hi = b;
    const double h = std::ldexp(1.0, -level);
    const double half = 0.5 * (b - a);
    constexpr double hp = 0.5 * std::numbers::pi;
    for (int k = 0;; ++k) {
        const double t = k * h;
        const double u = hp * std::sinh(t);
        const double ch = std::cosh(u);
        const double w = h * hp * std::cosh(t) / (ch * ch);
        // 1 - tanh(u) evaluated without cancellation
        const double comp = 2.0 / (std::exp(2.0 * u) + 1.0);
        if (w * half < 1e-300 || comp * half < 1e-300) break;
        const double d = half * comp;
        if (k == 0) {
            r.from_lo.push_back(half);
            r.from_hi.push_back(half);
            r.weights.push_back(half * w);
            continue;
        }
        // node near b and its mirror near a
        r.from_lo.push_back((b - a) - d);
        r.from_hi.push_back(d);
        r.weights.push_back(half * w);
        r.from_lo.push_back(d);
        r.from_hi.push_back((b - a) - d);
        r.weights.push_back(half * w);
        if (w < 1e-30) break;
    }
    return r;
}

}  // namespace strichlab
