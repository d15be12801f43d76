#include "cli_output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace strichlab::cli {

bool Document::all_pass() const {
    for (const auto& c : claims)
        if (!c.pass) return false;
    return true;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
}

json quadrature_json(const QuadratureSpec& spec) {
    return {{"eps0", json_number(spec.eps0)},
            {"halvings", spec.halvings},
            {"cells_across", spec.cells_across},
            {"refine", spec.refine},
            {"samples", spec.samples},
            {"seed", spec.seed},
            {"tol", json_number(spec.tol)},
            {"cutoff_radius", json_number(spec.cutoff_radius)},
            {"exclusion", json_number(spec.exclusion)}};
}

namespace {

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return json_number(v);
            else
                return v;
        },
        c);
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return format_number(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else
                return v;
        },
        c);
}

}  // namespace

json to_json(const Document& doc) {
    json out;
    out["schema"] = kSchema;
    out["tool"] = "strichlab";
    out["version"] = kVersion;
    out["subcommand"] = doc.subcommand;
    out["tag"] = doc.tag;
    out["config"] = doc.config;
    out["columns"] = doc.columns;
    json rows = json::array();
    for (const auto& r : doc.rows) {
        json row = json::array();
        for (const auto& c : r) row.push_back(cell_json(c));
        rows.push_back(std::move(row));
    }
    out["rows"] = std::move(rows);
    out["summary"] = doc.summary;
    json claims = json::array();
    for (const auto& c : doc.claims)
        claims.push_back({{"id", c.id},
                          {"anchor", c.anchor},
                          {"measured", json_number(c.measured)},
                          {"tolerance", json_number(c.tolerance)},
                          {"pass", c.pass}});
    out["claims"] = std::move(claims);
    out["status"] = doc.all_pass() ? "pass" : "fail";
    return out;
}

std::string to_csv(const Document& doc) {
    std::string out;
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
        if (i) out += ',';
        out += doc.columns[i];
    }
    out += '\n';
    for (const auto& r : doc.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += cell_text(r[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace strichlab::cli
