#include "pxlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pxlab/error.hpp"

namespace pxlab {
namespace {

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::vector<std::string>& extra,
                    const char* what) {
  for (const auto& [k, v] : j.items()) {
    (void)v;
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* s) { return k == s; }) ||
                    std::find(extra.begin(), extra.end(), k) != extra.end();
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + what);
  }
}

}  // namespace

json parse_json_text(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": JSON syntax error";
    throw ConfigError(os.str());
  }
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

json to_json(const Grid& g) {
  json cells = json::array(), extent = json::array();
  for (int a = 0; a < g.dim; ++a) {
    cells.push_back(g.cells[a]);
    extent.push_back(g.extent[a]);
  }
  return {{"dim", g.dim}, {"cells", cells}, {"extent", extent}};
}

Grid grid_from_json(const json& j) {
  require_object(j, "grid");
  reject_unknown(j, {"dim", "cells", "extent"}, {}, "grid");
  const int dim = get<int>(j, "dim");
  const auto cells = get<std::vector<int>>(j, "cells");
  auto extent = get_or<std::vector<double>>(j, "extent", std::vector<double>(cells.size(), 1.0));
  if (static_cast<int>(cells.size()) != dim || static_cast<int>(extent.size()) != dim)
    throw ConfigError("grid cells and extent must have dim entries");
  try {
    return Grid::make(cells, extent);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

json to_json(const ExponentField& p) {
  switch (p.kind()) {
    case ExponentKind::constant: return {{"kind", "constant"}, {"value", p.base()}};
    case ExponentKind::affine: return {{"kind", "affine"}, {"base", p.base()}, {"slope", p.coefficients()}};
    case ExponentKind::sinusoidal: return {{"kind", "sinusoidal"}, {"base", p.base()}, {"amplitude", p.amplitude()}};
    default: return {{"kind", "sampled"}, {"values", p.coefficients()}};
  }
}

ExponentField exponent_from_json(const json& j) {
  if (j.is_number()) return ExponentField::constant(j.get<double>());
  require_object(j, "exponent");
  const auto kind = get<std::string>(j, "kind");
  if (kind == "constant") {
    reject_unknown(j, {"kind", "value"}, {}, "exponent");
    return ExponentField::constant(get<double>(j, "value"));
  }
  if (kind == "affine") {
    reject_unknown(j, {"kind", "base", "slope"}, {}, "exponent");
    return ExponentField::affine(get<double>(j, "base"), get<std::vector<double>>(j, "slope"));
  }
  if (kind == "sinusoidal") {
    reject_unknown(j, {"kind", "base", "amplitude"}, {}, "exponent");
    return ExponentField::sinusoidal(get<double>(j, "base"), get<double>(j, "amplitude"));
  }
  if (kind == "sampled") {
    reject_unknown(j, {"kind", "values"}, {}, "exponent");
    return ExponentField::sampled(get<std::vector<double>>(j, "values"));
  }
  throw ConfigError("unknown exponent kind '" + kind + "'");
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "auto") return Scheme::automatic;
  if (s == "explicit") return Scheme::explicit_euler;
  if (s == "semi_implicit") return Scheme::semi_implicit;
  throw ConfigError("unknown scheme '" + s + "'");
}

json to_json(const SimConfig& c) {
  json src;
  switch (c.source.kind) {
    case SourceKind::standard: src = {{"kind", "standard"}}; break;
    case SourceKind::none: src = {{"kind", "none"}}; break;
    case SourceKind::barrier_auxiliary:
      src = {{"kind", "barrier_auxiliary"}, {"epsilon", c.source.epsilon}, {"lambda1", c.source.lambda1}};
      break;
  }
  return {{"grid", to_json(c.grid)},
          {"exponent", to_json(c.exponent)},
          {"r", c.r},
          {"initial", {{"profile", c.initial.profile}, {"amplitude", c.initial.amplitude}}},
          {"t_max", c.t_max},
          {"dt_safety", c.dt_safety},
          {"dt_max", c.dt_max},
          {"eps_reg", c.eps_reg},
          {"blow_up_threshold", c.blow_up_threshold},
          {"extinction_threshold", c.extinction_threshold},
          {"source", src},
          {"scheme", to_string(c.scheme)},
          {"stride", c.stride},
          {"output_interval", c.output_interval},
          {"change_limit", c.change_limit},
          {"max_steps", c.max_steps}};
}

SimConfig sim_config_from_json(const json& j, const std::vector<std::string>& extra_keys) {
  require_object(j, "config");
  reject_unknown(j,
                 {"grid", "exponent", "r", "initial", "t_max", "dt_safety", "dt_max", "eps_reg", "blow_up_threshold",
                  "extinction_threshold", "source", "scheme", "stride", "output_interval", "change_limit",
                  "max_steps"},
                 extra_keys, "config");
  SimConfig c;
  c.grid = grid_from_json(get<json>(j, "grid"));
  c.exponent = exponent_from_json(get<json>(j, "exponent"));
  c.r = get<double>(j, "r");
  if (j.contains("initial")) {
    const auto& ini = j.at("initial");
    require_object(ini, "initial");
    reject_unknown(ini, {"profile", "amplitude"}, {}, "initial");
    c.initial.profile = get_or<std::string>(ini, "profile", c.initial.profile);
    c.initial.amplitude = get_or<double>(ini, "amplitude", c.initial.amplitude);
  }
  c.t_max = get_or(j, "t_max", c.t_max);
  c.dt_safety = get_or(j, "dt_safety", c.dt_safety);
  c.dt_max = get_or(j, "dt_max", c.dt_max);
  c.eps_reg = get_or(j, "eps_reg", c.eps_reg);
  c.blow_up_threshold = get_or(j, "blow_up_threshold", c.blow_up_threshold);
  c.extinction_threshold = get_or(j, "extinction_threshold", c.extinction_threshold);
  c.scheme = scheme_from_string(get_or<std::string>(j, "scheme", "auto"));
  c.stride = get_or(j, "stride", c.stride);
  c.output_interval = get_or(j, "output_interval", c.output_interval);
  c.change_limit = get_or(j, "change_limit", c.change_limit);
  c.max_steps = get_or(j, "max_steps", c.max_steps);
  if (j.contains("source")) {
    const auto& s = j.at("source");
    require_object(s, "source");
    reject_unknown(s, {"kind", "epsilon", "lambda1", "phi"}, {}, "source");
    const auto kind = get<std::string>(s, "kind");
    if (kind == "standard") c.source.kind = SourceKind::standard;
    else if (kind == "none") c.source.kind = SourceKind::none;
    else if (kind == "barrier_auxiliary") {
      c.source.kind = SourceKind::barrier_auxiliary;
      c.source.epsilon = get<double>(s, "epsilon");
      c.source.lambda1 = get<double>(s, "lambda1");
      c.source.phi = get<std::vector<double>>(s, "phi");
    } else {
      throw ConfigError("unknown source kind '" + kind + "'");
    }
  }
  try {
    c.validate();
    if (c.exponent.kind() == ExponentKind::sampled && c.exponent.coefficients().size() != c.grid.size())
      throw InvalidArgument("sampled exponent needs one value per cell");
    (void)make_initial(c.grid, c.initial);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json to_json(const Quantity& q) {
  json j = {{"value", nullptr}, {"provenance", to_string(q.provenance)}, {"note", q.note}};
  if (q.defined() && std::isfinite(q.value)) j["value"] = q.value;
  return j;
}

json to_json(const TheoryConstants& c) {
  return {{"B", to_json(c.B)},
          {"C2", to_json(c.C2)},
          {"B1", to_json(c.B1)},
          {"alpha1", to_json(c.alpha1)},
          {"E1_printed", to_json(c.E1_printed)},
          {"E1_peak", to_json(c.E1_peak)},
          {"E1_used", to_json(c.E1_used)},
          {"alpha2", to_json(c.alpha2)},
          {"C0", to_json(c.C0)},
          {"C0_general_printed", to_json(c.C0_general_printed)},
          {"C0_display", to_json(c.C0_display)},
          {"T_star", to_json(c.T_star)},
          {"C1", to_json(c.C1)},
          {"K1", to_json(c.K1)},
          {"F_u0", to_json(c.F_u0)},
          {"T1", to_json(c.T1)},
          {"s", to_json(c.s)},
          {"beta", to_json(c.beta)},
          {"kappa", to_json(c.kappa)},
          {"C2_fd", to_json(c.C2_fd)},
          {"C3_fd", to_json(c.C3_fd)},
          {"T3", to_json(c.T3)}};
}

json to_json(const RegimeReport& r) {
  json hyps = json::array();
  for (const auto& h : r.hypotheses) hyps.push_back({{"name", h.name}, {"holds", h.holds}, {"witness", h.witness}});
  return {{"label", to_string(r.regime)},
          {"hypotheses", hyps},
          {"satisfied_blocks", r.satisfied_blocks},
          {"explanation", r.explanation}};
}

json to_json(const CheckResult& c) {
  json margins = json::array();
  for (std::size_t i = 0; i < c.margins.size(); ++i) margins.push_back({c.times[i], c.margins[i]});
  json j = {{"name", c.name}, {"verdict", to_string(c.verdict)}, {"worst_margin", nullptr},
            {"note", c.note}, {"margins", margins}};
  if (!c.margins.empty()) j["worst_margin"] = c.worst_margin;
  return j;
}

json to_json(const Event& e) {
  json j = {{"kind", to_string(e.kind)}, {"time", nullptr}, {"dt_error", nullptr}};
  if (e.kind != EventKind::none) {
    j["time"] = e.time;
    j["dt_error"] = e.dt_error;
  }
  return j;
}

json eigen_summary(const EigenPair& e) {
  return {{"lambda1", e.lambda1}, {"M", e.M}, {"residual", e.residual}, {"iterations", e.iterations},
          {"converged", e.converged}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(std::ostream& os, const std::vector<EnergyRecord>& records) {
  os << kSeriesHeader << '\n';
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << format_double(r.E) << ',' << format_double(r.G_half) << ','
       << format_double(r.G_sq) << ',' << format_double(r.H) << ',' << format_double(r.ut_l2sq) << ','
       << format_double(r.grad_modular) << ',' << format_double(r.lr) << ',' << format_double(r.linf) << '\n';
  }
}

void write_field_csv(std::ostream& os, const ScalarField& u, std::string_view value_name) {
  const Grid& g = u.grid;
  static constexpr const char* axes[] = {"x", "y", "z"};
  os << "index";
  for (int a = 0; a < g.dim; ++a) os << ',' << axes[a];
  os << ',' << value_name << '\n';
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto c = g.center(g.unravel(i));
    os << i;
    for (int a = 0; a < g.dim; ++a) os << ',' << format_double(c[a]);
    os << ',' << format_double(u[i]) << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace pxlab
