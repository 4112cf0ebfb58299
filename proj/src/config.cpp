#include "zfchiral/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "zfchiral/errors.hpp"

namespace zfchiral {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Location {
  int line = 0;
  std::string where() const { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }
};

double parse_double(std::string_view v, const std::string& key, Location loc) {
  double value = 0.0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ValidationError(loc.where() + key + ": expected a number, got '" + std::string(v) + "'");
  }
  return value;
}

double parse_angle(std::string_view v, const std::string& key, Location loc) {
  if (v.size() >= 2 && v.substr(v.size() - 2) == "pi") {
    std::string_view head = trim(v.substr(0, v.size() - 2));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    const double mult = head.empty() ? 1.0 : parse_double(head, key, loc);
    return mult * constants::pi;
  }
  return parse_double(v, key, loc);
}

std::size_t parse_count(std::string_view v, const std::string& key, Location loc) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError(loc.where() + key + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return static_cast<std::size_t>(value);
}

int cartesian_index(std::string_view key) {
  static const std::map<std::string_view, int> idx = {{"jxx", 0}, {"jxy", 1}, {"jxz", 2}, {"jyx", 3}, {"jyy", 4},
                                                      {"jyz", 5}, {"jzx", 6}, {"jzy", 7}, {"jzz", 8}};
  const auto it = idx.find(key);
  return it == idx.end() ? -1 : it->second;
}

// Tracks which coupling style was used so mixing both can be reported.
struct ParseState {
  bool saw_zf = false;
  bool saw_cartesian = false;
  ZFParams zf;
  CartesianJ cart;
};

void assign(ExperimentConfig& cfg, ParseState& st, const std::string& section, const std::string& key,
            std::string_view value, Location loc) {
  const std::string full = section.empty() ? key : section + "." + key;
  auto num = [&] { return parse_double(value, full, loc); };
  if (section.empty()) {
    if (key == "scenario") {
      cfg.scenario = std::string(value);
    } else if (key == "seed") {
      cfg.seed = parse_count(value, full, loc);
    } else {
      throw ValidationError(loc.where() + "unknown key '" + full + "'");
    }
  } else if (section == "spin_system") {
    if (key == "gamma1") cfg.spins.gamma1 = num();
    else if (key == "gamma2") cfg.spins.gamma2 = num();
    else if (key == "label1") cfg.spins.label1 = std::string(value);
    else if (key == "label2") cfg.spins.label2 = std::string(value);
    else throw ValidationError(loc.where() + "unknown key '" + full + "'");
  } else if (section == "coupling") {
    if (key == "j0") { st.zf.j0 = num(); st.saw_zf = true; }
    else if (key == "j1bar") { st.zf.j1bar = num(); st.saw_zf = true; }
    else if (key == "dbar") { st.zf.dbar = num(); st.saw_zf = true; }
    else if (key == "kappa") cfg.kappa = num();
    else if (const int i = cartesian_index(key); i >= 0) {
      st.cart.m(i / 3, i % 3) = num();
      st.saw_cartesian = true;
    } else {
      throw ValidationError(loc.where() + "unknown key '" + full + "'");
    }
  } else if (section == "orientation") {
    auto& o = cfg.orientation;
    if (key == "mu") o.mu_debye = num();
    else if (key == "e_applied") o.e_applied = num();
    else if (key == "eps_r") o.eps_r = num();
    else if (key == "temperature") o.temperature = num();
    else if (key == "bond_length") o.bond_length = num();
    else if (key == "order_parameter") cfg.order_parameter = num();
    else if (key == "dipolar_sign") cfg.dipolar_sign = num();
    else throw ValidationError(loc.where() + "unknown key '" + full + "'");
  } else if (section == "acquisition") {
    auto& a = cfg.acquisition;
    if (key == "dt") a.dt = num();
    else if (key == "n") a.n = parse_count(value, full, loc);
    else if (key == "t2eff") a.t2eff = value == "inf" ? INFINITY : num();
    else if (key == "detector_tilt") a.detector_tilt = parse_angle(value, full, loc);
    else if (key == "prepolarization_field") a.prepolarization_field = num();
    else if (key == "prepolarization_temperature") a.prepolarization_temperature = num();
    else if (key == "fit_half_width") a.fit_half_width = num();
    else throw ValidationError(loc.where() + "unknown key '" + full + "'");
  } else if (section == "pulse") {
    auto& p = cfg.pulse;
    if (key == "mode") {
      if (value == "ideal") p.ideal = true;
      else if (value == "rotation") p.ideal = false;
      else throw ValidationError(loc.where() + full + ": expected 'rotation' or 'ideal'");
    } else if (key == "axis") {
      if (value.size() != 1) throw ValidationError(loc.where() + full + ": expected x, y or z");
      try {
        p.axis = parse_axis(value[0]);
      } catch (const ValidationError&) {
        throw ValidationError(loc.where() + full + ": expected x, y or z");
      }
    } else if (key == "theta1") {
      p.theta1 = parse_angle(value, full, loc);
    } else if (key == "theta2") {
      p.theta2 = parse_angle(value, full, loc);
    } else {
      throw ValidationError(loc.where() + "unknown key '" + full + "'");
    }
  } else if (section == "output") {
    if (key == "directory") cfg.output.directory = std::string(value);
    else if (key == "prefix") cfg.output.prefix = std::string(value);
    else throw ValidationError(loc.where() + "unknown key '" + full + "'");
  } else {
    throw ValidationError(loc.where() + "unknown section '" + section + "'");
  }
}

void finish(ExperimentConfig& cfg, const ParseState& st) {
  if (st.saw_zf && st.saw_cartesian) {
    throw ValidationError("coupling: both Cartesian tensor (jxx..jzz) and effective parameters (j0/j1bar/dbar) given");
  }
  if (st.saw_cartesian) {
    cfg.cartesian = st.cart;
    cfg.zf.reset();
  } else {
    cfg.zf = st.zf;
    cfg.cartesian.reset();
  }
  cfg.validate();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(acquisition.dt > 0.0)) throw ValidationError("acquisition.dt must be > 0");
  if (acquisition.n < 2) throw ValidationError("acquisition.n must be >= 2");
  if (!(acquisition.t2eff > 0.0)) throw ValidationError("acquisition.t2eff must be > 0");
  if (!(acquisition.fit_half_width > 0.0)) throw ValidationError("acquisition.fit_half_width must be > 0");
  if (!(acquisition.prepolarization_temperature > 0.0)) {
    throw ValidationError("acquisition.prepolarization_temperature must be > 0");
  }
  if (std::find(scenario_names().begin(), scenario_names().end(), scenario) == scenario_names().end()) {
    throw ValidationError("scenario: unknown scenario '" + scenario + "'");
  }
  if (cartesian.has_value() == zf.has_value()) {
    throw ValidationError("coupling: exactly one of Cartesian tensor or effective parameters must be provided");
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ValidationError("coupling.kappa must be > 0");
  if (dipolar_sign != 1.0 && dipolar_sign != -1.0) throw ValidationError("orientation.dipolar_sign must be +1 or -1");
  if (order_parameter && !(std::abs(*order_parameter) <= 1.0)) {
    throw ValidationError("orientation.order_parameter must satisfy |s| <= 1");
  }
  try {
    spins.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("spin_system: ") + e.what());
  }
  orientation.validate();
}

double ExperimentConfig::resolved_order_parameter() const {
  return order_parameter ? *order_parameter : zfchiral::order_parameter(orientation);
}

ZFParams ExperimentConfig::resolved_params() const {
  if (zf) return *zf;
  const IrreducibleJ d = decompose(*cartesian);
  const double s = resolved_order_parameter();
  ZFParams p;
  p.j0 = d.j0;
  OrientationConditions o = orientation;
  o.gamma1 = spins.gamma1;
  o.gamma2 = spins.gamma2;
  p.j1bar = average_rank1(rank1_zero_component(d), s);
  p.dbar = dipolar_sign * std::abs(residual_dipolar(o, s));
  return p;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  ParseState st;
  std::string section;
  Location loc;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++loc.line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(loc.where() + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> known = {"spin_system", "coupling", "orientation",
                                                     "acquisition", "pulse",    "output"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ValidationError(loc.where() + "unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(loc.where() + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(loc.where() + "missing key before '='");
    if (value.empty()) throw ValidationError(loc.where() + "missing value for '" + key + "'");
    assign(cfg, st, section, key, value, loc);
  }
  finish(cfg, st);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void apply_override(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value) {
  ParseState st;
  st.saw_zf = cfg.zf.has_value();
  st.saw_cartesian = cfg.cartesian.has_value();
  if (cfg.zf) st.zf = *cfg.zf;
  if (cfg.cartesian) st.cart = *cfg.cartesian;
  const auto dot = dotted_key.find('.');
  const std::string section = dot == std::string::npos ? "" : dotted_key.substr(0, dot);
  const std::string key = dot == std::string::npos ? dotted_key : dotted_key.substr(dot + 1);
  ExperimentConfig next = cfg;  // leave cfg untouched on error
  assign(next, st, section, key, trim(value), Location{});
  finish(next, st);
  cfg = std::move(next);
}

}  // namespace zfchiral
