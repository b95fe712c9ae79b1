#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pxlab/checks.hpp"
#include "pxlab/eigen.hpp"
#include "pxlab/simulator.hpp"
#include "pxlab/theory.hpp"

namespace pxlab {

using json = nlohmann::json;

/// Parses JSON text; a syntax error becomes a ConfigError naming `origin:line:column`.
json parse_json_text(std::string_view text, std::string_view origin = "<input>");
json parse_json_file(const std::filesystem::path& path);

json to_json(const Grid& g);
Grid grid_from_json(const json& j);

json to_json(const ExponentField& p);
ExponentField exponent_from_json(const json& j);

json to_json(const SimConfig& c);
/// Reads the simulation keys of `j`; the caller lists any extra keys it accepts.
SimConfig sim_config_from_json(const json& j, const std::vector<std::string>& extra_keys = {});

Scheme scheme_from_string(const std::string& s);

json to_json(const Quantity& q);
json to_json(const TheoryConstants& c);
json to_json(const RegimeReport& r);
json to_json(const CheckResult& c);
json to_json(const Event& e);
json eigen_summary(const EigenPair& e);

/// %.17g, with nan / inf spelled out.
std::string format_double(double v);

inline constexpr const char* kSeriesHeader = "t,E,G_half,G_sq,H,ut_l2sq,grad_modular,lr,linf";

void write_series_csv(std::ostream& os, const std::vector<EnergyRecord>& records);
/// Columns index, x[, y[, z]], <value_name>; rows in flattened (x fastest) order.
void write_field_csv(std::ostream& os, const ScalarField& u, std::string_view value_name = "u");

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pxlab
