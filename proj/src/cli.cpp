#include "strichlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cli_output.hpp"
#include "strichlab/bessel_mixed.hpp"
#include "strichlab/convolution.hpp"
#include "strichlab/delta_geometry.hpp"
#include "strichlab/errors.hpp"
#include "strichlab/extension.hpp"
#include "strichlab/spectral_sphere.hpp"
#include "strichlab/surfaces.hpp"

namespace strichlab::cli {

namespace {

namespace fs = std::filesystem;
using std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// shared options

struct CommonOptions {
    std::string output = "csv";
    std::string out = "-";
    std::string workspace;
    std::string preset = "default";
    double eps = 0.0;
    int halvings = 0;
    int cells = 0;
    int refine = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    double cutoff = 0.0;
    double exclusion = 0.0;
    std::map<std::string, CLI::Option*> opts;

    [[nodiscard]] bool given(const std::string& name) const { return opts.at(name)->count() > 0; }

    QuadratureSpec spec() const {
        QuadratureSpec s = preset == "high" ? QuadratureSpec::high_resolution() : QuadratureSpec::defaults();
        if (given("eps")) s.eps0 = eps;
        if (given("halvings")) s.halvings = halvings;
        if (given("cells")) s.cells_across = cells;
        if (given("refine")) s.refine = refine;
        if (given("samples")) s.samples = samples;
        if (given("seed")) s.seed = seed;
        if (given("tol")) s.tol = tol;
        if (given("cutoff")) s.cutoff_radius = cutoff;
        if (given("exclusion")) s.exclusion = exclusion;
        return s;
    }

    void require_seed(const std::string& what) const {
        if (!given("seed")) throw UsageError(what + " uses Monte Carlo; --seed is mandatory");
    }
};

void add_common(CLI::App& app, CommonOptions& o) {
    app.add_option("--output,--report", o.output, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", o.out, "Output path ('-' for stdout)")->capture_default_str();
    app.add_option("--workspace", o.workspace, "Directory collecting JSON run records");
    app.add_option("--preset", o.preset, "Quadrature preset")
        ->check(CLI::IsMember({"default", "high"}))
        ->capture_default_str();
    o.opts["eps"] = app.add_option("--eps", o.eps, "Initial mollifier width (0 = automatic)")
                        ->check(CLI::NonNegativeNumber);
    o.opts["halvings"] = app.add_option("--halvings", o.halvings, "Mollifier halvings")->check(CLI::Range(1, 12));
    o.opts["cells"] = app.add_option("--cells,--grid-cells", o.cells, "Cells across the mollifier support")
                          ->check(CLI::Range(8, 256));
    o.opts["refine"] = app.add_option("--refine", o.refine, "Tensor-rule refinement")->check(CLI::Range(0, 8));
    o.opts["samples"] = app.add_option("--samples", o.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
    o.opts["seed"] = app.add_option("--seed", o.seed, "Monte-Carlo seed");
    o.opts["tol"] = app.add_option("--tol", o.tol, "Target tolerance")->check(CLI::PositiveNumber);
    o.opts["cutoff"] = app.add_option("--cutoff", o.cutoff, "Truncation radius (0 = automatic)")
                           ->check(CLI::NonNegativeNumber);
    o.opts["exclusion"] = app.add_option("--exclusion", o.exclusion, "Distance kept from singular loci")
                              ->check(CLI::NonNegativeNumber);
}

// ---------------------------------------------------------------------------
// small helpers

std::string sanitize(std::string s) {
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
    return s;
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t min_cols) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        bool numeric = true;
        while (std::getline(ss, field, ',')) {
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
            if (end == field.c_str() || (end && *end != '\0')) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw UsageError("non-numeric row in '" + path + "': " + line);
        }
        first = false;
        if (row.size() < min_cols) throw UsageError("row with fewer than " + std::to_string(min_cols) + " columns in '" + path + "'");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw UsageError("no data rows in '" + path + "'");
    return rows;
}

bool is_file(const std::string& s) { return fs::is_regular_file(fs::path(s)); }

Claim claim(std::string id, std::string anchor, double measured, double tolerance, bool pass) {
    return {std::move(id), std::move(anchor), measured, tolerance, pass};
}

std::vector<double> grid(double lo, double hi, int steps) {
    std::vector<double> r;
    if (steps == 1) return {lo};
    for (int i = 0; i < steps; ++i) r.push_back(lo + (hi - lo) * i / (steps - 1));
    return r;
}

// ---------------------------------------------------------------------------
// conv

struct ConvOptions {
    std::string surface;
    int fold = 2;
    double rmin = 0.0, rmax = 2.0;
    int steps = 20;
    std::string grid_spec;
    double tau_offset = 0.5;
    std::string oracle = "auto";
    double mc_eps = 0.05;
};

Document run_conv(const ConvOptions& o, const CommonOptions& c) {
    const QuadratureSpec spec = c.spec();
    const SurfaceId id = parse_surface(o.surface);
    const SurfaceMeasure& s = surface(id);
    double lo = o.rmin, hi = o.rmax;
    int steps = o.steps;
    if (!o.grid_spec.empty()) {
        char tail = 0;
        if (std::sscanf(o.grid_spec.c_str(), "%lf:%lf:%d%c", &lo, &hi, &steps, &tail) != 3)
            throw UsageError("--grid expects rmin:rmax:steps");
    }
    if (steps < 1 || lo < 0.0 || hi < lo) throw UsageError("grid needs 0 <= rmin <= rmax and steps >= 1");
    if (o.fold == 3 && !s.is_sphere()) throw UsageError("three-fold convolutions exist for sphere1 and sphere2 only");
    std::string oracle = o.oracle;
    if (oracle == "auto") oracle = o.fold == 2 ? "delta" : "none";
    if (oracle == "mc") {
        if (o.fold != 3) throw UsageError("the Monte-Carlo oracle covers three-fold convolutions");
        c.require_seed("--oracle mc");
    }
    if (oracle == "delta" && o.fold != 2) throw UsageError("the delta oracle covers two-fold convolutions");

    Document d;
    d.subcommand = "conv";
    d.tag = o.surface + "-fold" + std::to_string(o.fold);
    d.config = {{"surface", o.surface}, {"fold", o.fold},           {"rmin", json_number(lo)},
                {"rmax", json_number(hi)}, {"steps", steps},        {"tau_offset", json_number(o.tau_offset)},
                {"oracle", oracle},      {"mc_eps", json_number(o.mc_eps)}};
    const auto rs = grid(lo, hi, steps);

    if (id == SurfaceId::perturbed2) {
        if (!(o.tau_offset > 0.0)) throw UsageError("perturbed2 compares at tau > 0 (--tau-offset)");
        d.columns = {"r", "tau", "paraboloid", "perturbed", "error", "strict"};
        int strict = 0;
        double worst = 0.0;
        for (double r : rs) {
            const auto res = comparison_check(Eigen::Vector2d(r, 0.0), o.tau_offset, spec);
            d.rows.push_back({r, o.tau_offset, res.rhs, res.lhs, res.error, res.strict});
            strict += res.strict ? 1 : 0;
            worst = std::max(worst, res.lhs / res.rhs);
        }
        d.summary = {{"points", rs.size()}, {"strict", strict}};
        d.claims.push_back(claim("comparison_strict", "perturbed paraboloid convolution below pi/2", worst, 1.0,
                                 strict == static_cast<int>(rs.size())));
        return d;
    }

    auto point = [&](double r, double tau) {
        Point p = Point::Zero(s.ambient_dim);
        p[0] = r;
        if (!s.is_sphere()) p[s.ambient_dim - 1] = tau;
        return p;
    };

    if (o.fold == 2) {
        if (s.is_sphere())
            d.columns = {"r", "closed_form", "oracle", "oracle_err", "abs_error", "rel_error"};
        else
            d.columns = {"r", "tau", "closed_form", "oracle", "oracle_err", "abs_error", "rel_error"};
        double worst = 0.0;
        int evaluated = 0;
        for (double r : rs) {
            const double tau = s.is_sphere() ? 0.0 : 2.0 * s.height(r / 2.0) + o.tau_offset;
            const Point p = point(r, tau);
            const double closed = conv2_closed(s, p);
            double ov = std::nan(""), oe = std::nan("");
            if (oracle == "delta") {
                try {
                    const auto e = conv2_oracle(s, p, spec);
                    ov = e.value;
                    oe = e.error;
                } catch (const SingularProximity&) {
                }
            }
            const double ae = std::abs(ov - closed);
            const double re = ae / std::abs(closed);
            if (std::isfinite(re)) {
                worst = std::max(worst, re);
                ++evaluated;
            }
            std::vector<Cell> row{r};
            if (!s.is_sphere()) row.emplace_back(tau);
            for (double v : {closed, ov, oe, ae, re}) row.emplace_back(v);
            d.rows.push_back(std::move(row));
        }
        d.summary = {{"points", rs.size()}, {"oracle_points", evaluated}};
        if (evaluated > 0)
            d.claims.push_back(claim("oracle_agreement", "two-fold convolution closed form against the delta oracle",
                                     worst, 1e-2, worst <= 1e-2));
        return d;
    }

    // three-fold spheres
    const bool circle = id == SurfaceId::sphere1;
    d.columns = {"r", "closed_form", "closed_err", "near_singular", "oracle", "oracle_err", "abs_error"};
    std::vector<double> values;
    double worst = 0.0;
    int compared = 0;
    for (double r : rs) {
        double v, e = 0.0;
        bool near = false;
        if (circle) {
            const auto q = conv3_circle(r, spec);
            v = q.value;
            e = q.error;
            near = q.near_singular;
        } else {
            v = conv3_sphere2(r);
        }
        double ov = std::nan(""), oe = std::nan("");
        if (oracle == "mc") {
            const auto m = conv3_monte_carlo(circle ? 2 : 3, r, o.mc_eps, spec);
            ov = m.value;
            oe = m.error;
            if (std::isfinite(v) && v > 0.0 && !near) {
                worst = std::max(worst, std::abs(ov - v) / v);
                ++compared;
            }
        }
        values.push_back(v);
        d.rows.push_back({r, v, e, near, ov, oe, std::abs(ov - v)});
    }
    d.summary = {{"points", rs.size()}};
    if (compared > 0)
        d.claims.push_back(claim("monte_carlo_agreement", "three-fold sphere convolution against Monte Carlo", worst,
                                 3e-2, worst <= 3e-2));
    if (circle && lo <= 0.8 && hi >= 3.0 && std::abs(rs.back() - 3.0) < 1e-12) {
        bool finite = true, rising = true, falling = true;
        double prev_rise = -1.0, prev_fall = INFINITY;
        int rise_n = 0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const double r = rs[i], v = values[i];
            if (std::abs(r - 1.0) >= spec.exclusion && !std::isfinite(v)) finite = false;
            if (r >= 0.8 && r <= 0.99) {
                rising = rising && v > prev_rise;
                prev_rise = v;
                ++rise_n;
            }
            if (r > 1.0 + spec.exclusion) {
                falling = falling && v <= prev_fall;
                prev_fall = v;
            }
        }
        const bool zero_end = values.back() == 0.0;
        d.summary["shape"] = {{"finite_off_singular", finite},
                              {"increasing_0.8_0.99", rising && rise_n >= 2},
                              {"decreasing_to_zero_at_3", falling && zero_end}};
        const bool ok = finite && rising && rise_n >= 2 && falling && zero_end;
        d.claims.push_back(claim("circle_triple_shape", "three-fold circle convolution profile: finite off r=1, "
                                 "rising on [0.8,0.99], falling to 0 at r=3",
                                 values.back(), 0.0, ok));
    }
    return d;
}

// ---------------------------------------------------------------------------
// functional

struct FunctionalOptions {
    std::string surface;
    std::string trial;
    double width = 0.0;
    std::vector<double> a_values{1.0, 2.0, 4.0, 8.0};
    bool plancherel = false;
    int pairs = 8;
};

std::string default_trial(SurfaceId id) {
    switch (id) {
        case SurfaceId::paraboloid2: return "gaussian";
        case SurfaceId::cone3: return "exponential";
        case SurfaceId::hyperboloid2: return "hyperbolic";
        case SurfaceId::sphere2: return "constant";
        default: return "gaussian";
    }
}

std::string extremizer_class(SurfaceId id) {
    switch (id) {
        case SurfaceId::paraboloid2: return "gaussians";
        case SurfaceId::cone3: return "exponentials";
        case SurfaceId::hyperboloid2: return "none";
        case SurfaceId::sphere2: return "constants";
        default: return "unknown";
    }
}

TrialFunction load_trial(SurfaceId id, const std::string& name, double width) {
    if (is_file(name)) {
        const auto rows = read_numeric_csv(name, 2);
        std::vector<double> r, v;
        for (const auto& row : rows) {
            r.push_back(row[0]);
            v.push_back(row[1]);
        }
        return tabulated_radial_trial(id, std::move(r), std::move(v), fs::path(name).stem().string());
    }
    if (width > 0.0) {
        if (name == "gaussian") return gaussian_trial(id, width);
        if (name == "exponential") return exponential_trial(id, width);
        if (name == "hyperbolic") return hyperboloid_trial(width);
        if (name == "disc") return disc_indicator_trial(id, width);
        throw UsageError("--width applies to gaussian, exponential, hyperbolic and disc trials");
    }
    return builtin_trial(id, name);
}

bool in_extremizer_family(SurfaceId id, const std::string& trial) {
    return (id == SurfaceId::paraboloid2 && trial == "gaussian") || (id == SurfaceId::cone3 && trial == "exponential");
}

Document run_functional(const FunctionalOptions& o, const CommonOptions& c) {
    const QuadratureSpec spec = c.spec();
    const SurfaceId id = parse_surface(o.surface);
    const std::string trial_name = o.trial.empty() ? default_trial(id) : o.trial;
    Document d;
    d.subcommand = "functional";
    d.config = {{"surface", o.surface},     {"trial", trial_name},   {"width", json_number(o.width)},
                {"a_values", json::array()}, {"plancherel", o.plancherel}, {"pairs", o.pairs}};
    for (double a : o.a_values) d.config["a_values"].push_back(json_number(a));
    d.columns = {"quantity", "value", "error"};
    auto row = [&d](const std::string& q, double v, double e) { d.rows.push_back({q, v, e}); };

    if (id == SurfaceId::sphere1) throw UsageError("functional supports paraboloid2, cone3, hyperboloid2, sphere2, perturbed2");
    if (id == SurfaceId::sphere2) {
        if (trial_name != "constant") throw UsageError("on sphere2 the functional is evaluated for constants");
        d.tag = o.surface + "-constant";
        // ||sigma * sigma||_2^2 with sigma * sigma = 2 pi / |xi| on |xi| < 2
        const Rule rr = composite_gauss(0.0, 2.0, 8, 12);
        const double l2 = rr.integrate([](double r) {
            const double v = 2.0 * pi / r;
            return v * v * 4.0 * pi * r * r;
        });
        const double norm_sq = 4.0 * pi;
        row("l2_conv_sq", l2, 1e-12 * l2);
        row("norm_sq", norm_sq, 0.0);
        row("functional", l2 / (norm_sq * norm_sq), 1e-12);
        const auto fh = funk_hecke_spectrum(3, 12, spec);
        double worst = -INFINITY;
        for (int k = 2; k <= 12; k += 2) {
            const auto& l = fh.lambda[static_cast<std::size_t>(k)];
            row("lambda_" + std::to_string(k), l.value, l.error);
            worst = std::max(worst, l.value + l.error);
        }
        const bool ok = worst < 0.0;
        d.claims.push_back(claim("constants_even_spectrum_negative",
                                 "Funk-Hecke eigenvalues of even degree >= 2 are negative on S^2", worst, 0.0, ok));
        d.summary["extremizer"] = {{"surface", o.surface},
                                   {"trial", "constant"},
                                   {"expected", "constants"},
                                   {"verdict", ok ? "critical point with negative second variation" : "inconclusive"},
                                   {"relative_defect", nullptr},
                                   {"consistent", ok}};
        return d;
    }

    const TrialFunction f = load_trial(id, trial_name, o.width);
    d.tag = o.surface + "-" + sanitize(f.name) + (o.width > 0.0 ? "-w" + format_number(o.width) : "");

    // functional equation on seeded matched pairs inside |xi| < 1.2
    if (o.pairs > 0) {
        const int n = surface(id).base_dim;
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> u(-1.2 / std::sqrt(n), 1.2 / std::sqrt(n));
        std::vector<BasePair> pairs;
        for (int i = 0; i < o.pairs; ++i) {
            Point a(n), b(n);
            for (int k = 0; k < n; ++k) a[k] = u(rng);
            for (int k = 0; k < n; ++k) b[k] = u(rng);
            pairs.emplace_back(a, b);
        }
        double defect = std::nan("");
        try {
            defect = functional_equation_defect(f, pairs);
        } catch (const std::domain_error&) {
        }
        row("functional_equation_defect", defect, 0.0);
    }

    json ext = {{"surface", o.surface}, {"trial", f.name}, {"expected", extremizer_class(id)}};
    if (id == SurfaceId::perturbed2) {
        ext["verdict"] = "not evaluated";
        ext["consistent"] = nullptr;
        d.summary["extremizer"] = ext;
        return d;
    }

    const auto chain = sharp_chain(f, spec);
    row("l2_conv_sq", chain.l2_conv_sq.value, chain.l2_conv_sq.error);
    row("norm_sq", chain.norm_sq.value, chain.norm_sq.error);
    row("sup_conv", chain.sup, 0.0);
    row("bound", chain.bound.value, chain.bound.error);
    row("defect", chain.defect.value, chain.defect.error);
    const double rel = chain.relative_defect();
    const double rel_err = chain.defect.error / chain.bound.value;
    row("relative_defect", rel, rel_err);
    const bool tight = std::abs(rel) <= 1e-3;
    const bool strict = chain.defect.value > chain.defect.error;
    const bool builtin = !is_file(trial_name);
    const bool expect_tight = in_extremizer_family(id, f.name);
    ext["verdict"] = tight ? "extremizer" : (strict ? "not an extremizer" : "inconclusive");
    ext["relative_defect"] = json_number(rel);
    ext["relative_defect_error"] = json_number(rel_err);
    // tabulated profiles carry no expected class; their verdict is reported only
    if (builtin && expect_tight)
        d.claims.push_back(claim("sharp_chain_tight", "sharp chain is an equality for the extremizers", std::abs(rel),
                                 1e-3, tight));
    else if (builtin)
        d.claims.push_back(claim("sharp_chain_strict", "sharp chain defect is positive off the extremizers", rel,
                                 rel_err, strict));
    bool consistent = expect_tight ? tight : strict;

    if (id == SurfaceId::hyperboloid2 && !o.a_values.empty()) {
        const auto seq = hyperboloid_sequence(o.a_values, spec);
        for (std::size_t i = 0; i < seq.a.size(); ++i)
            row("phi_a" + format_number(seq.a[i]), seq.phi[i].value, seq.phi[i].error);
        row("ceiling", seq.ceiling, 0.0);
        d.claims.push_back(claim("sequence_increasing", "f_a functional increases with a", 0.0, 0.0, seq.increasing));
        d.claims.push_back(claim("sequence_below_ceiling", "f_a functional stays below sqrt(sup)",
                                 seq.phi.back().value, seq.ceiling, seq.below_ceiling));
        consistent = consistent && seq.increasing && seq.below_ceiling;
        const double amax = *std::max_element(seq.a.begin(), seq.a.end());
        if (amax >= 8.0) {
            const std::size_t i = static_cast<std::size_t>(std::max_element(seq.a.begin(), seq.a.end()) - seq.a.begin());
            const double gap = 1.0 - seq.phi[i].value / seq.ceiling;
            d.claims.push_back(claim("sequence_approaches_ceiling", "largest a within 10% of the ceiling", gap, 0.1,
                                     gap <= 0.1));
            consistent = consistent && gap <= 0.1;
        }
        ext["verdict"] = consistent ? "no extremizer; f_a is an extremizing sequence" : "inconclusive";
    }
    if (o.plancherel && id == SurfaceId::paraboloid2) {
        const auto p = plancherel_ratio(f, spec);
        row("extension_l4_fourth", p.l4_fourth.value, p.l4_fourth.error);
        row("plancherel_ratio", p.ratio, 0.0);
    }
    ext["consistent"] = builtin ? json(consistent) : json(nullptr);
    d.summary["extremizer"] = ext;
    return d;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
    int dim = 3;
    int kmax = 12;
};

const char* sign_text(int s) { return s > 0 ? "+" : (s < 0 ? "-" : "0"); }

Document run_spectrum(const SpectrumOptions& o, const CommonOptions& c) {
    const auto fh = funk_hecke_spectrum(o.dim, o.kmax, c.spec());
    Document d;
    d.subcommand = "spectrum";
    d.tag = "d" + std::to_string(o.dim);
    d.config = {{"dim", o.dim}, {"kmax", o.kmax}, {"kernel", fh.kernel}};
    d.columns = {"k", "lambda", "err", "sign", "reference"};
    int asserted = 0, matched = 0;
    for (int k = 0; k <= o.kmax; ++k) {
        const auto& l = fh.lambda[static_cast<std::size_t>(k)];
        const auto ref = reference_sign(o.dim, k);
        const int s = fh.sign(k);
        if (ref) {
            ++asserted;
            matched += s == *ref ? 1 : 0;
        }
        d.rows.push_back({static_cast<std::int64_t>(k), l.value, l.error, std::string(sign_text(s)),
                          std::string(ref ? sign_text(*ref) : "?")});
    }
    d.summary = {{"asserted", asserted}, {"matched", matched}};
    d.claims.push_back(claim("sign_pattern", "Funk-Hecke sign pattern", matched, asserted, matched == asserted));
    return d;
}

// ---------------------------------------------------------------------------
// trilinear

struct TrilinearOptions {
    std::string h = "cos2";
    std::string mode = "t";
    std::string sigma = "tensor";
};

Document run_trilinear(const TrilinearOptions& o, const CommonOptions& c) {
    const QuadratureSpec spec = c.spec();
    const SigmaMode mode = o.sigma == "mc" ? SigmaMode::monte_carlo : SigmaMode::tensor;
    if (mode == SigmaMode::monte_carlo) c.require_seed("--sigma mc");
    CircleFunction h;
    std::string hname = o.h;
    if (is_file(o.h)) {
        const auto rows = read_numeric_csv(o.h, 2);
        std::vector<double> th, v;
        for (const auto& r : rows) {
            th.push_back(r[0]);
            v.push_back(r[1]);
        }
        h = tabulated_circle_function(std::move(th), std::move(v));
        hname = fs::path(o.h).stem().string();
    } else {
        h = builtin_circle_function(o.h);
    }
    Document d;
    d.subcommand = "trilinear";
    d.tag = sanitize(hname) + "-" + o.mode + (mode == SigmaMode::monte_carlo ? "-mc" : "");
    d.config = {{"h", hname}, {"mode", o.mode}, {"sigma", o.sigma}};
    d.columns = {"quantity", "value", "error"};
    auto row = [&d](const std::string& q, double v, double e) { d.rows.push_back({q, v, e}); };

    if (o.mode == "step1") {
        const auto p = step1_probe(h, spec, mode);
        row("lhs", p.lhs.value, p.lhs.error);
        row("rhs", p.rhs.value, p.rhs.error);
        row("gap", p.gap.value, p.gap.error);
        d.summary = {{"open_probe", true}};
        return d;
    }

    const double mean = circle_mean(h);
    bool constant = true, nonneg = true, antipodal = true;
    for (int i = 0; i < 512; ++i) {
        const double t = 2.0 * pi * i / 512;
        const double v = h(t);
        constant = constant && std::abs(v - mean) <= 1e-12 * std::max(1.0, std::abs(mean));
        nonneg = nonneg && v >= 0.0;
        antipodal = antipodal && std::abs(h(t + pi) - v) <= 1e-12 * std::max(1.0, std::abs(v));
    }
    const auto one = builtin_circle_function("one");
    const auto t1 = t_form(one, one, one, spec, mode);
    const auto th = constant ? Estimate<double>{mean * mean * mean * t1.value, std::pow(std::abs(mean), 3) * t1.error}
                             : t_form(h, h, h, spec, mode);
    const double c3 = mean * mean * mean;
    const double gap = c3 * t1.value - th.value;
    const double gap_err = std::abs(c3) * t1.error + th.error;
    row("T_hhh", th.value, th.error);
    row("T_111", t1.value, t1.error);
    row("mean", mean, 0.0);
    row("mean_cubed_T_111", c3 * t1.value, std::abs(c3) * t1.error);
    row("gap", gap, gap_err);
    d.summary = {{"constant", constant}, {"nonnegative", nonneg}, {"antipodal", antipodal}};
    if (constant)
        d.claims.push_back(claim("equality_for_constants", "T(h,h,h) = c^3 T(1,1,1) for constants", std::abs(gap),
                                 gap_err + 1e-12 * std::abs(c3 * t1.value), std::abs(gap) <= gap_err + 1e-12 * std::abs(c3 * t1.value)));
    else if (nonneg && antipodal)
        d.claims.push_back(claim("strict_below_constants", "T(h,h,h) < c^3 T(1,1,1) for nonconstant h", gap, gap_err,
                                 gap > gap_err));
    return d;
}

// ---------------------------------------------------------------------------
// bessel

struct BesselOptions {
    int scan = 4;
};

Document run_bessel(const BesselOptions& o, const CommonOptions& c) {
    if (o.scan < 0 || o.scan > 16) throw UsageError("--scan must lie in [0, 16]");
    const QuadratureSpec spec = c.spec();
    const auto rep = monotonicity_scan(o.scan, spec);
    Document d;
    d.subcommand = "bessel";
    d.tag = "scan" + std::to_string(o.scan);
    d.config = {{"scan", o.scan}, {"cutoff", json_number(spec.cutoff_radius > 0 ? spec.cutoff_radius : bessel_cutoff(o.scan))}};
    d.columns = {"k", "l", "m", "I", "err", "strictly_below_I000"};
    int below = 0, nonzero = 0;
    for (const auto& r : rep.rows) {
        d.rows.push_back({static_cast<std::int64_t>(r.idx.k), static_cast<std::int64_t>(r.idx.l),
                          static_cast<std::int64_t>(r.idx.m), r.value.value, r.value.error, r.strictly_below});
        if (r.idx.max() > 0) {
            ++nonzero;
            below += r.strictly_below ? 1 : 0;
        }
    }
    d.summary = {{"rows", rep.rows.size()}, {"nonzero", nonzero}, {"strictly_below", below}};
    if (nonzero > 0)
        d.claims.push_back(claim("monotonicity", "I(k,l,m) < I(0,0,0) for every nonzero triple", below, nonzero,
                                 rep.all_below));
    // I(0,0,0) at two tail radii
    auto s1 = spec, s2 = spec;
    const double R = spec.cutoff_radius > 0 ? spec.cutoff_radius : bessel_cutoff(0);
    s1.cutoff_radius = R;
    s2.cutoff_radius = 2.0 * R;
    const auto a = bessel_triple_integral({0, 0, 0}, s1);
    const auto b = bessel_triple_integral({0, 0, 0}, s2);
    d.summary["i000"] = {{"R", json_number(R)},
                         {"value_R", json_number(a.value)},
                         {"error_R", json_number(a.error)},
                         {"value_2R", json_number(b.value)},
                         {"error_2R", json_number(b.error)}};
    d.claims.push_back(claim("i000_tail_radius", "I(0,0,0) reproducible across two tail radii",
                             std::abs(a.value - b.value), a.error, std::abs(a.value - b.value) <= a.error));
    return d;
}

// ---------------------------------------------------------------------------
// mixednorm

struct MixedOptions {
    std::string coeffs;
    int random = 10;
    int max_degree = 8;
};

std::vector<std::pair<std::string, HarmonicExpansion>> mixed_inputs(const MixedOptions& o, const QuadratureSpec& spec) {
    std::vector<std::pair<std::string, HarmonicExpansion>> out;
    if (!o.coeffs.empty()) {
        HarmonicExpansion f;
        for (const auto& r : read_numeric_csv(o.coeffs, 2)) {
            const double d = r[0];
            if (d != std::round(d)) throw UsageError("degrees must be integers");
            f.terms.push_back({static_cast<int>(d), 0, Complex(r[1], r.size() > 2 ? r[2] : 0.0)});
        }
        out.emplace_back(fs::path(o.coeffs).stem().string(), std::move(f));
        return out;
    }
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> nterms(1, 5), degree(-o.max_degree, o.max_degree);
    for (int i = 0; i < o.random; ++i) {
        HarmonicExpansion f;
        const int n = nterms(rng);
        bool nonconstant = false;
        for (int j = 0; j < n; ++j) {
            int deg = degree(rng);
            if (j == n - 1 && !nonconstant && deg == 0) deg = o.max_degree > 0 ? 1 : 0;
            nonconstant = nonconstant || deg != 0;
            const double re = g(rng), im = g(rng);
            f.terms.push_back({deg, 0, Complex(re, im)});
        }
        out.emplace_back("random" + std::to_string(i), std::move(f));
    }
    HarmonicExpansion constant;
    constant.terms.push_back({0, 0, Complex(1.3, -0.4)});
    out.emplace_back("constant", std::move(constant));
    return out;
}

Document run_mixednorm(const MixedOptions& o, const CommonOptions& c) {
    if (o.max_degree < 0 || o.max_degree > 16) throw UsageError("--max-degree must lie in [0, 16]");
    if (o.random < 0) throw UsageError("--random must be nonnegative");
    const QuadratureSpec spec = c.spec();
    const auto inputs = mixed_inputs(o, spec);
    Document d;
    d.subcommand = "mixednorm";
    d.tag = o.coeffs.empty() ? "random" + std::to_string(o.random) : sanitize(fs::path(o.coeffs).stem().string());
    d.config = {{"coeffs", o.coeffs}, {"random", o.coeffs.empty() ? o.random : 0}, {"max_degree", o.max_degree}};
    d.columns = {"expansion", "via_sum", "sum_err", "via_direct", "direct_err", "relative_gap", "bound", "ratio", "constants_only"};
    double worst_gap = 0.0;
    bool bound_ok = true;
    for (const auto& [name, f] : inputs) {
        const auto r = mixed_norm_sixth(f, spec);
        const double gap = r.relative_gap();
        worst_gap = std::max(worst_gap, gap);
        const double ratio = r.via_sum.value / r.bound;
        if (r.constants_only)
            bound_ok = bound_ok && std::abs(ratio - 1.0) <= 1e-6;
        else
            bound_ok = bound_ok && r.via_sum.value + r.via_sum.error < r.bound * (1.0 - 1e-6);
        d.rows.push_back({name, r.via_sum.value, r.via_sum.error, r.via_direct.value, r.via_direct.error, gap, r.bound,
                          ratio, r.constants_only});
    }
    d.claims.push_back(claim("sum_direct_agreement", "mixed norm by triple sum and by radial quadrature", worst_gap,
                             1e-4, worst_gap <= 1e-4));
    d.claims.push_back(claim("sharp_bound_constants_only", "sharp bound attained only by constants", 0.0, 1e-6, bound_ok));
    return d;
}

// ---------------------------------------------------------------------------
// delta

Document run_delta(const CommonOptions& c) {
    const auto suite = delta_calculus_suite(c.spec());
    Document d;
    d.subcommand = "delta";
    d.tag = "suite";
    d.columns = {"check", "lhs", "rhs", "residual", "relative", "error", "monotone"};
    double worst = 0.0;
    bool mono = true;
    for (const auto& s : suite) {
        d.rows.push_back({s.name, s.result.lhs, s.result.rhs, s.result.residual, s.relative, s.result.error, s.monotone});
        worst = std::max(worst, s.relative);
        mono = mono && s.monotone;
    }
    d.claims.push_back(claim("residuals", "delta-calculus identities", worst, 1e-4, worst < 1e-4));
    d.claims.push_back(claim("monotone_convergence", "mollified increments shrink over the halvings", 0.0, 0.0, mono));
    return d;
}

// ---------------------------------------------------------------------------
// report

const std::vector<std::string> kFamilies = {"conv", "functional", "spectrum", "trilinear", "bessel", "mixednorm", "delta"};
const std::vector<std::string> kExtremizerSurfaces = {"paraboloid2", "cone3", "hyperboloid2", "sphere2"};

Document run_report(const CommonOptions& c) {
    if (c.workspace.empty()) throw UsageError("report needs --workspace");
    const fs::path dir(c.workspace);
    if (!fs::is_directory(dir)) throw UsageError("workspace '" + c.workspace + "' does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<json> records;
    for (const auto& p : files) {
        std::ifstream in(p);
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object() || j.value("schema", 0) != kSchema || !j.contains("subcommand")) continue;
        if (j["subcommand"] == "report") continue;
        j["__file"] = p.filename().string();
        records.push_back(std::move(j));
    }
    if (records.empty()) throw UsageError("workspace '" + c.workspace + "' holds no run records");

    Document d;
    d.subcommand = "report";
    d.tag = "report";
    d.config = {{"workspace", fs::path(c.workspace).filename().string()}};
    d.columns = {"record", "claim", "anchor", "measured", "tolerance", "pass"};
    std::vector<std::string> present, missing;
    json extremizers = json::array();
    std::map<std::string, json> by_surface;
    int failed = 0;
    for (const auto& r : records) {
        const std::string sub = r["subcommand"];
        if (std::find(present.begin(), present.end(), sub) == present.end()) present.push_back(sub);
        for (const auto& cl : r["claims"]) {
            auto num = [](const json& v) { return v.is_number() ? v.get<double>() : std::nan(""); };
            const bool pass = cl["pass"].get<bool>();
            failed += pass ? 0 : 1;
            d.rows.push_back({r["__file"].get<std::string>(), cl["id"].get<std::string>(), cl["anchor"].get<std::string>(),
                              num(cl["measured"]), num(cl["tolerance"]), pass});
            d.claims.push_back({r["__file"].get<std::string>() + ":" + cl["id"].get<std::string>(),
                                cl["anchor"].get<std::string>(), num(cl["measured"]), num(cl["tolerance"]), pass});
        }
        if (sub == "functional" && r["summary"].contains("extremizer")) {
            const json& e = r["summary"]["extremizer"];
            by_surface[e["surface"].get<std::string>()].push_back(e);
        }
    }
    for (const auto& f : kFamilies)
        if (std::find(present.begin(), present.end(), f) == present.end()) missing.push_back(f);
    for (const auto& s : kExtremizerSurfaces) {
        if (!by_surface.count(s)) continue;
        extremizers.push_back({{"surface", s}, {"trials", by_surface[s]}});
    }
    std::sort(present.begin(), present.end());
    d.summary = {{"records", records.size()},
                 {"present", present},
                 {"missing", missing},
                 {"partial", !missing.empty()},
                 {"claims", d.claims.size()},
                 {"failed", failed},
                 {"extremizers", extremizers}};
    return d;
}

// ---------------------------------------------------------------------------
// output

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

void emit(Document& doc, const CommonOptions& c) {
    doc.config["quadrature"] = quadrature_json(c.spec());
    const json j = to_json(doc);
    const std::string as_json = j.dump(2) + "\n";
    const std::string body = c.output == "json" ? as_json : to_csv(doc);
    if (c.out == "-") {
        std::cout << body;
        std::cout.flush();
    } else {
        write_text(c.out, body);
        if (c.output == "csv") {
            json meta = j;
            meta.erase("rows");
            write_text(c.out + ".meta.json", meta.dump(2) + "\n");
        }
    }
    if (!c.workspace.empty() && doc.subcommand != "report") {
        fs::create_directories(c.workspace);
        write_text((fs::path(c.workspace) / (doc.subcommand + "-" + sanitize(doc.tag) + ".json")).string(), as_json);
    }
    for (const auto& cl : doc.claims)
        if (!cl.pass) std::cerr << "claim failed: " << cl.id << " (" << cl.anchor << ")\n";
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"strichlab: sharp extension and Strichartz numerics"};
    app.require_subcommand(1);
    app.fallthrough();
    CommonOptions common;
    add_common(app, common);

    ConvOptions conv;
    auto* sc = app.add_subcommand("conv", "Convolution densities against closed forms");
    sc->add_option("--surface", conv.surface, "Surface id")->required();
    sc->add_option("--fold", conv.fold, "2 or 3")->check(CLI::IsMember({2, 3}))->capture_default_str();
    sc->add_option("--rmin", conv.rmin, "Smallest |xi|")->capture_default_str();
    sc->add_option("--rmax", conv.rmax, "Largest |xi|")->capture_default_str();
    sc->add_option("--steps", conv.steps, "Grid points")->capture_default_str();
    sc->add_option("--grid", conv.grid_spec, "rmin:rmax:steps");
    sc->add_option("--tau-offset", conv.tau_offset, "tau above the support boundary (graphs)")->capture_default_str();
    sc->add_option("--oracle", conv.oracle, "auto, none, delta or mc")
        ->check(CLI::IsMember({"auto", "none", "delta", "mc"}))
        ->capture_default_str();
    sc->add_option("--mc-eps", conv.mc_eps, "Mollifier width of the Monte-Carlo oracle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    FunctionalOptions fun;
    auto* sf = app.add_subcommand("functional", "Sharp chain, extremizer defects and the hyperboloid sequence");
    sf->add_option("--surface", fun.surface, "Surface id")->required();
    sf->add_option("--trial", fun.trial, "Builtin trial name or CSV of radius,value");
    sf->add_option("--width", fun.width, "Scale parameter of the builtin trial")->check(CLI::NonNegativeNumber);
    sf->add_option("--a", fun.a_values, "Hyperboloid sequence parameters")->delimiter(',');
    sf->add_flag("--plancherel", fun.plancherel, "Fourier-side cross-check (paraboloid2)");
    sf->add_option("--pairs", fun.pairs, "Matched pairs for the functional equation")->check(CLI::Range(0, 1000));

    SpectrumOptions spec_o;
    auto* ss = app.add_subcommand("spectrum", "Funk-Hecke eigenvalues and signs");
    ss->add_option("--dim", spec_o.dim, "Ambient dimension d")->check(CLI::Range(3, 12))->capture_default_str();
    ss->add_option("--kmax", spec_o.kmax, "Largest degree")->check(CLI::Range(0, 20))->capture_default_str();

    TrilinearOptions tri;
    auto* st = app.add_subcommand("trilinear", "Trilinear form T and the reduction probe");
    st->set_help_flag("--help", "Print this help message and exit");
    st->add_option("--h", tri.h, "Builtin circle function or CSV of theta,value")->capture_default_str();
    st->add_option("--mode", tri.mode, "t or step1")->check(CLI::IsMember({"t", "step1"}))->capture_default_str();
    st->add_option("--sigma", tri.sigma, "tensor or mc")->check(CLI::IsMember({"tensor", "mc"}))->capture_default_str();

    BesselOptions bes;
    auto* sb = app.add_subcommand("bessel", "Bessel triple integrals and the monotonicity scan");
    sb->add_option("--scan", bes.scan, "Largest index")->capture_default_str();

    MixedOptions mix;
    auto* sm = app.add_subcommand("mixednorm", "Mixed-norm functional on the circle");
    sm->add_option("--coeffs", mix.coeffs, "CSV of degree,re,im");
    sm->add_option("--random", mix.random, "Number of seeded random expansions")->capture_default_str();
    sm->add_option("--max-degree", mix.max_degree, "Largest |degree| of random expansions")->capture_default_str();

    auto* sd = app.add_subcommand("delta", "Delta-calculus identity suite");
    auto* sr = app.add_subcommand("report", "Summary of the run records in a workspace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        Document doc;
        if (*sc) doc = run_conv(conv, common);
        else if (*sf) doc = run_functional(fun, common);
        else if (*ss) doc = run_spectrum(spec_o, common);
        else if (*st) doc = run_trilinear(tri, common);
        else if (*sb) doc = run_bessel(bes, common);
        else if (*sm) doc = run_mixednorm(mix, common);
        else if (*sd) doc = run_delta(common);
        else if (*sr) doc = run_report(common);
        emit(doc, common);
        return doc.all_pass() ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace strichlab::cli
