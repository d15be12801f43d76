#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "strichlab/quadrature.hpp"

namespace strichlab::cli {

using json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;
inline constexpr const char* kVersion = "1.0.0";

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// One verified statement of a run.  `measured` and `tolerance` are in the
/// units the check uses; `pass` is decided by the subcommand.
struct Claim {
    std::string id;
    std::string anchor;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Everything a subcommand produces.  Rendered as CSV (header + rows) or as
/// a schema-versioned JSON document.
struct Document {
    std::string subcommand;
    std::string tag;
    json config = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json summary = json::object();
    std::vector<Claim> claims;

    [[nodiscard]] bool all_pass() const;
};

/// 12 significant digits, C locale; inf, -inf and nan spelled out.
std::string format_number(double x);
/// Number rounded to 12 significant digits, or null when not finite.
json json_number(double x);

json quadrature_json(const QuadratureSpec& spec);
json to_json(const Document& doc);
std::string to_csv(const Document& doc);

}  // namespace strichlab::cli
