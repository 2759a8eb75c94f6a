#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exlimit/errors.hpp"
#include "exlimit/format.hpp"
#include "exlimit/measures.hpp"
#include "exlimit/verify.hpp"

namespace exlimit {

enum class RunMode { limit, simulate, verify, sweep };

inline std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::limit: return "limit";
    case RunMode::simulate: return "simulate";
    case RunMode::verify: return "verify";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

inline std::optional<RunMode> parse_mode(std::string_view text) {
  if (text == "limit") return RunMode::limit;
  if (text == "simulate") return RunMode::simulate;
  if (text == "verify") return RunMode::verify;
  if (text == "sweep") return RunMode::sweep;
  return std::nullopt;
}

/// Evaluation grid: an explicit point list, or lo:hi:steps expanded to
/// equally spaced points.
struct GridSpec {
  enum class Kind { range, list };

  Kind kind = Kind::range;
  double lo = -1.0;
  double hi = 4.0;
  std::int64_t steps = 101;
  std::vector<double> points;

  static GridSpec range(double lo, double hi, std::int64_t steps) {
    GridSpec grid;
    grid.kind = Kind::range;
    grid.lo = lo;
    grid.hi = hi;
    grid.steps = steps;
    return grid;
  }

  static GridSpec list(std::vector<double> points) {
    GridSpec grid;
    grid.kind = Kind::list;
    grid.points = std::move(points);
    return grid;
  }

  std::vector<double> expand() const {
    std::vector<double> xs;
    if (kind == Kind::list) {
      xs = points;
    } else {
      if (steps < 2) throw validation_error("x_grid: range needs at least 2 steps");
      if (!(hi > lo)) throw validation_error("x_grid: range needs hi > lo");
      const double step = (hi - lo) / static_cast<double>(steps - 1);
      xs.reserve(static_cast<std::size_t>(steps));
      for (std::int64_t k = 0; k < steps; ++k) {
        xs.push_back(lo + static_cast<double>(k) * step);
      }
    }
    if (xs.empty()) throw validation_error("x_grid: empty after expansion");
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i - 1] < xs[i])) {
        throw validation_error("x_grid: points must be strictly increasing");
      }
    }
    return xs;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// The measure exactly as the config specified it (builder reference or
/// inline component tables), so a parsed scenario serializes back to an
/// equivalent document.
struct MeasureSpec {
  std::string builder;  // "", "example1" or "example2"
  double p = 0.0;
  std::optional<ComponentLaw> xi;
  std::vector<WeightedComponent> components;

  DirectingMeasure build() const {
    if (builder == "example1") return example1_measure();
    if (builder == "example2") {
      return example2_measure(p, xi.value_or(ComponentLaw::normal(0.0, 1.0)));
    }
    return DirectingMeasure(components);
  }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

/// One full experiment description, the unit of work of the CLI.
struct Scenario {
  std::string name;
  RunMode mode = RunMode::limit;
  MeasureSpec measure;
  std::int64_t n = 0;  // 0 = unset (allowed for limit/sweep)
  std::int64_t replications = 100000;
  std::uint64_t seed = 42;
  GridSpec x_grid;
  std::vector<std::int64_t> sweep_ns;
  double atom_exclusion = kDefaultAtomExclusion;
  std::string output_path;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::string strip(std::string_view sv) {
  const auto begin = sv.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = sv.find_last_not_of(" \t\r");
  return std::string(sv.substr(begin, end - begin + 1));
}

inline double parse_double_or_throw(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw validation_error(where + ": expected a number, got '" + text + "'");
  }
  return value;
}

inline std::int64_t parse_int_or_throw(const std::string& text, const std::string& where) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw validation_error(where + ": expected an integer, got '" + text + "'");
  }
  return value;
}

inline std::uint64_t parse_uint_or_throw(const std::string& text, const std::string& where) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw validation_error(where + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

// Key/value store that records which keys were consumed, so leftovers can
// be reported by name.
struct KeyTable {
  std::string label;
  std::map<std::string, std::pair<std::string, int>> entries;  // value, line

  void insert(const std::string& key, const std::string& value, int line) {
    if (entries.count(key)) {
      throw validation_error("line " + std::to_string(line) + ": duplicate key '" + key +
                             "' in " + label);
    }
    entries[key] = {value, line};
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string value = it->second.first;
    entries.erase(it);
    return value;
  }

  std::string require(const std::string& key) {
    auto value = take(key);
    if (!value) {
      throw validation_error(label + ": missing key '" + key + "'");
    }
    return *value;
  }

  void reject_leftovers() const {
    if (!entries.empty()) {
      const auto& [key, where] = *entries.begin();
      throw validation_error("line " + std::to_string(where.second) + ": unknown key '" +
                             key + "' in " + label);
    }
  }
};

inline ComponentLaw parse_component_law(KeyTable& table) {
  const std::string family = table.require("family");
  if (family == "normal") {
    const double mean = parse_double_or_throw(table.require("mean"), table.label + ".mean");
    const double variance =
        parse_double_or_throw(table.require("variance"), table.label + ".variance");
    return ComponentLaw::normal(mean, variance);
  }
  if (family == "rademacher_shifted") {
    const double shift = parse_double_or_throw(table.require("shift"), table.label + ".shift");
    const double scale = parse_double_or_throw(table.require("scale"), table.label + ".scale");
    return ComponentLaw::rademacher_shifted(shift, scale);
  }
  if (family == "point_mass") {
    const double value = parse_double_or_throw(table.require("value"), table.label + ".value");
    return ComponentLaw::point_mass(value);
  }
  if (family == "convolution_rademacher_normal") {
    return ComponentLaw::convolution_rademacher_normal();
  }
  throw validation_error(table.label + ".family: unknown family '" + family + "'");
}

inline GridSpec parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = [&] {
      std::vector<std::string> out;
      std::string current;
      for (char c : text) {
        if (c == ':') {
          out.push_back(current);
          current.clear();
        } else {
          current.push_back(c);
        }
      }
      out.push_back(current);
      return out;
    }();
    if (parts.size() != 3) {
      throw validation_error("x_grid: expected lo:hi:steps, got '" + text + "'");
    }
    return GridSpec::range(parse_double_or_throw(strip(parts[0]), "x_grid.lo"),
                           parse_double_or_throw(strip(parts[1]), "x_grid.hi"),
                           parse_int_or_throw(strip(parts[2]), "x_grid.steps"));
  }
  std::vector<double> points;
  for (const auto& token : split_list(text)) {
    points.push_back(parse_double_or_throw(token, "x_grid"));
  }
  return GridSpec::list(std::move(points));
}

}  // namespace detail

/// Parses the line-oriented scenario document: top-level `key = value`
/// pairs plus one `[component]` table per mixture component (or a
/// `builder = ...` reference, with `p` and an optional `[xi]` table for
/// the default-indicator model). Returns a fully validated Scenario with
/// defaults applied. Parse errors carry the line number, semantic errors
/// the offending key.
inline Scenario parse_scenario(std::string_view text) {
  detail::KeyTable top{"scenario", {}};
  std::vector<detail::KeyTable> components;
  detail::KeyTable xi{"xi", {}};
  bool saw_xi = false;
  detail::KeyTable* current = &top;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string line(text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                    : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    // strip comments: a '#' at line start or preceded by whitespace
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    const std::string trimmed = detail::strip(line);
    if (trimmed.empty()) continue;

    if (trimmed.front() == '[') {
      if (trimmed.back() != ']') {
        throw validation_error("line " + std::to_string(line_no) + ": unterminated section '"
                               + trimmed + "'");
      }
      const std::string section = detail::strip(trimmed.substr(1, trimmed.size() - 2));
      if (section == "component") {
        components.push_back(
            {"component[" + std::to_string(components.size()) + "]", {}});
        current = &components.back();
      } else if (section == "xi") {
        if (saw_xi) {
          throw validation_error("line " + std::to_string(line_no) +
                                 ": duplicate [xi] section");
        }
        saw_xi = true;
        current = &xi;
      } else {
        throw validation_error("line " + std::to_string(line_no) + ": unknown section [" +
                               section + "]");
      }
      continue;
    }

    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw validation_error("line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + trimmed + "'");
    }
    const std::string key = detail::strip(trimmed.substr(0, eq));
    const std::string value = detail::strip(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw validation_error("line " + std::to_string(line_no) + ": empty key");
    }
    current->insert(key, value, line_no);
  }

  Scenario scenario;
  scenario.name = top.require("name");
  const std::string mode_text = top.require("mode");
  const auto mode = parse_mode(mode_text);
  if (!mode) {
    throw validation_error("mode: expected limit|simulate|verify|sweep, got '" + mode_text +
                           "'");
  }
  scenario.mode = *mode;

  if (auto v = top.take("n")) {
    scenario.n = detail::parse_int_or_throw(*v, "n");
    if (scenario.n < 1) throw validation_error("n: must be >= 1");
  }
  if (auto v = top.take("replications")) {
    scenario.replications = detail::parse_int_or_throw(*v, "replications");
    if (scenario.replications < 1) throw validation_error("replications: must be >= 1");
  }
  if (auto v = top.take("seed")) {
    scenario.seed = detail::parse_uint_or_throw(*v, "seed");
  }
  if (auto v = top.take("x_grid")) {
    scenario.x_grid = detail::parse_grid(*v);
  }
  if (auto v = top.take("atom_exclusion")) {
    scenario.atom_exclusion = detail::parse_double_or_throw(*v, "atom_exclusion");
    if (!(scenario.atom_exclusion >= 0.0)) {
      throw validation_error("atom_exclusion: must be >= 0");
    }
  }
  if (auto v = top.take("sweep_ns")) {
    for (const auto& token : detail::split_list(*v)) {
      scenario.sweep_ns.push_back(detail::parse_int_or_throw(token, "sweep_ns"));
    }
  }

  if (auto b = top.take("builder")) {
    scenario.measure.builder = *b;
    if (!components.empty()) {
      throw validation_error("builder: cannot be combined with [component] tables");
    }
    if (*b == "example1") {
      if (top.take("p")) throw validation_error("p: not accepted by builder 'example1'");
      if (saw_xi) throw validation_error("[xi]: not accepted by builder 'example1'");
    } else if (*b == "example2") {
      // the cited builder contract: p required, xi defaults to normal(0,1)
      scenario.measure.p =
          detail::parse_double_or_throw(top.require("p"), "p");
      if (saw_xi) {
        scenario.measure.xi = detail::parse_component_law(xi);
        xi.reject_leftovers();
      }
    } else {
      throw validation_error("builder: unknown builder '" + *b + "'");
    }
  } else {
    if (top.take("p")) {
      throw validation_error("p: only meaningful with builder = example2");
    }
    if (saw_xi) {
      throw validation_error("[xi]: only meaningful with builder = example2");
    }
    if (components.empty()) {
      throw validation_error("scenario: needs either builder = ... or [component] tables");
    }
    for (auto& table : components) {
      const double weight =
          detail::parse_double_or_throw(table.require("weight"), table.label + ".weight");
      scenario.measure.components.push_back({weight, detail::parse_component_law(table)});
      table.reject_leftovers();
    }
  }

  if (auto v = top.take("output")) {
    scenario.output_path = *v;
  } else {
    scenario.output_path = scenario.name + ".csv";
  }
  top.reject_leftovers();

  // mode-specific requirements
  if ((scenario.mode == RunMode::simulate || scenario.mode == RunMode::verify) &&
      scenario.n == 0) {
    throw validation_error("n: required for mode " + to_string(scenario.mode));
  }
  if (scenario.mode == RunMode::sweep) {
    if (scenario.sweep_ns.empty()) {
      throw validation_error("sweep_ns: required for mode sweep");
    }
    for (std::size_t i = 0; i < scenario.sweep_ns.size(); ++i) {
      if (scenario.sweep_ns[i] < 1) throw validation_error("sweep_ns: entries must be >= 1");
      if (i > 0 && scenario.sweep_ns[i - 1] >= scenario.sweep_ns[i]) {
        throw validation_error("sweep_ns: must be strictly increasing");
      }
    }
  }

  scenario.x_grid.expand();       // validates
  (void)scenario.measure.build();  // validates weights and families
  return scenario;
}

namespace detail {

inline void serialize_law(std::string& out, const ComponentLaw& law) {
  switch (law.family()) {
    case ComponentLaw::Family::normal:
      out += "family = normal\n";
      out += "mean = " + format_double(law.param_a()) + "\n";
      out += "variance = " + format_double(law.param_b()) + "\n";
      break;
    case ComponentLaw::Family::rademacher_shifted:
      out += "family = rademacher_shifted\n";
      out += "shift = " + format_double(law.param_a()) + "\n";
      out += "scale = " + format_double(law.param_b()) + "\n";
      break;
    case ComponentLaw::Family::point_mass:
      out += "family = point_mass\n";
      out += "value = " + format_double(law.param_a()) + "\n";
      break;
    case ComponentLaw::Family::convolution_rademacher_normal:
      out += "family = convolution_rademacher_normal\n";
      break;
  }
}

}  // namespace detail

/// Canonical textual form of a scenario; parse_scenario(serialize_scenario(s))
/// reproduces s exactly.
inline std::string serialize_scenario(const Scenario& scenario) {
  std::string out;
  out += "name = " + scenario.name + "\n";
  out += "mode = " + to_string(scenario.mode) + "\n";
  if (scenario.n > 0) out += "n = " + format_int(scenario.n) + "\n";
  out += "replications = " + format_int(scenario.replications) + "\n";
  out += "seed = " + std::to_string(scenario.seed) + "\n";
  if (scenario.x_grid.kind == GridSpec::Kind::range) {
    out += "x_grid = " + format_double(scenario.x_grid.lo) + ":" +
           format_double(scenario.x_grid.hi) + ":" + format_int(scenario.x_grid.steps) + "\n";
  } else {
    out += "x_grid = ";
    for (std::size_t i = 0; i < scenario.x_grid.points.size(); ++i) {
      if (i > 0) out += ",";
      out += format_double(scenario.x_grid.points[i]);
    }
    out += "\n";
  }
  if (!scenario.sweep_ns.empty()) {
    out += "sweep_ns = ";
    for (std::size_t i = 0; i < scenario.sweep_ns.size(); ++i) {
      if (i > 0) out += ",";
      out += format_int(scenario.sweep_ns[i]);
    }
    out += "\n";
  }
  out += "atom_exclusion = " + format_double(scenario.atom_exclusion) + "\n";
  out += "output = " + scenario.output_path + "\n";
  if (!scenario.measure.builder.empty()) {
    out += "builder = " + scenario.measure.builder + "\n";
    if (scenario.measure.builder == "example2") {
      out += "p = " + format_double(scenario.measure.p) + "\n";
      if (scenario.measure.xi) {
        out += "\n[xi]\n";
        detail::serialize_law(out, *scenario.measure.xi);
      }
    }
  } else {
    for (const auto& wc : scenario.measure.components) {
      out += "\n[component]\n";
      out += "weight = " + format_double(wc.weight) + "\n";
      detail::serialize_law(out, wc.law);
    }
  }
  return out;
}

}  // namespace exlimit
