#include "ratchet/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ratchet/errors.hpp"
#include "ratchet/numfmt.hpp"

namespace ratchet {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double plain_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end)
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end)
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::Quantum: return "quantum";
    case Engine::Optical: return "optical";
    case Engine::Both: break;
  }
  return "both";
}

std::string modes_name(ScanModes m) {
  switch (m) {
    case ScanModes::FixedK: return "fixed_k";
    case ScanModes::FixedKickPhase: return "fixed_kick_phase";
    case ScanModes::Both: break;
  }
  return "both";
}

struct Key {
  std::function<void(RunConfig&, std::string_view)> set;
  // Empty result: the key is omitted from the manifest.
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <typename T>
Key number_key(T RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) {
            if constexpr (std::is_same_v<T, int>) c.*field = parse_int(v);
            else c.*field = parse_pi_number(v);
          },
          [field](const RunConfig& c) -> std::optional<std::string> {
            if constexpr (std::is_same_v<T, int>) return std::to_string(c.*field);
            else return format_double(c.*field);
          }};
}

Key optional_double_key(std::optional<double> RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) { c.*field = parse_pi_number(v); },
          [field](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*field)) return std::nullopt;
            return format_double(*(c.*field));
          }};
}

Key list_key(std::vector<int> RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) { c.*field = parse_int_list(v); },
          [field](const RunConfig& c) -> std::optional<std::string> { return join(c.*field); }};
}

const std::map<std::string, Key, std::less<>>& keys() {
  static const std::map<std::string, Key, std::less<>> table = {
      {"engine",
       {[](RunConfig& c, std::string_view v) {
          if (v == "quantum") c.engine = Engine::Quantum;
          else if (v == "optical") c.engine = Engine::Optical;
          else if (v == "both") c.engine = Engine::Both;
          else throw std::invalid_argument("expected quantum, optical or both");
        },
        [](const RunConfig& c) -> std::optional<std::string> { return engine_name(c.engine); }}},
      {"K", number_key(&RunConfig::K)},
      {"alpha", number_key(&RunConfig::alpha)},
      {"phi", number_key(&RunConfig::phi)},
      {"hbar", optional_double_key(&RunConfig::hbar_input)},
      {"distance", optional_double_key(&RunConfig::distance_input)},
      {"lambda", number_key(&RunConfig::lambda_m)},
      {"period", number_key(&RunConfig::period_m)},
      {"focal", number_key(&RunConfig::focal_m)},
      {"reflectivity", number_key(&RunConfig::reflectivity)},
      {"periods", number_key(&RunConfig::periods)},
      {"points_per_period", number_key(&RunConfig::points_per_period)},
      {"beta", number_key(&RunConfig::beta)},
      {"beta_ensemble", number_key(&RunConfig::beta_ensemble)},
      {"beam_width", number_key(&RunConfig::beam_width_m)},
      {"optical_periods", number_key(&RunConfig::optical_periods)},
      {"samples_per_period", number_key(&RunConfig::samples_per_period)},
      {"n_kicks", number_key(&RunConfig::n_kicks)},
      {"n_levels",
       {[](RunConfig& c, std::string_view v) {
          if (v == "continuous") c.n_levels.reset();
          else c.n_levels = parse_int(v);
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          return c.n_levels ? std::to_string(*c.n_levels) : "continuous";
        }}},
      {"normalization",
       {[](RunConfig& c, std::string_view v) {
          if (v == "row") c.normalization = Normalization::Row;
          else if (v == "loss") c.normalization = Normalization::Loss;
          else throw std::invalid_argument("expected row or loss");
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          return c.normalization == Normalization::Row ? "row" : "loss";
        }}},
      {"order_span", number_key(&RunConfig::order_span)},
      {"gamma", number_key(&RunConfig::gamma)},
      {"row_height", number_key(&RunConfig::row_height)},
      {"scan_modes",
       {[](RunConfig& c, std::string_view v) {
          if (v == "fixed_k") c.scan_modes = ScanModes::FixedK;
          else if (v == "fixed_kick_phase") c.scan_modes = ScanModes::FixedKickPhase;
          else if (v == "both") c.scan_modes = ScanModes::Both;
          else throw std::invalid_argument("expected fixed_k, fixed_kick_phase or both");
        },
        [](const RunConfig& c) -> std::optional<std::string> { return modes_name(c.scan_modes); }}},
      {"scan_min", number_key(&RunConfig::scan_min)},
      {"scan_max", number_key(&RunConfig::scan_max)},
      {"scan_step", number_key(&RunConfig::scan_step)},
      {"kicks_at", list_key(&RunConfig::kicks_at)},
      {"compare_beam_width", number_key(&RunConfig::compare_beam_width_m)},
      {"compare_periods", number_key(&RunConfig::compare_periods)},
      {"compare_levels", list_key(&RunConfig::compare_levels)},
      {"out",
       {[](RunConfig& c, std::string_view v) { c.out = std::string(v); },
        [](const RunConfig& c) -> std::optional<std::string> { return c.out; }}},
  };
  return table;
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void validate_and_resolve(RunConfig& c, const std::set<std::string, std::less<>>& given) {
  require(!(c.hbar_input && c.distance_input), "hbar", "exactly one of hbar or distance may be given");
  require(given.count("out") && !c.out.empty(), "out", "missing required key");

  require(std::isfinite(c.K) && c.K >= 0.0, "K", "must be finite and >= 0");
  require(std::isfinite(c.alpha), "alpha", "must be finite");
  require(std::isfinite(c.phi), "phi", "must be finite");
  require(finite_positive(c.lambda_m), "lambda", "must be positive");
  require(finite_positive(c.period_m), "period", "must be positive");
  require(finite_positive(c.focal_m), "focal", "must be positive");
  require(std::isfinite(c.reflectivity) && c.reflectivity > 0.0 && c.reflectivity <= 1.0,
          "reflectivity", "must lie in (0, 1]");
  if (c.hbar_input) require(finite_positive(*c.hbar_input), "hbar", "must be positive");
  if (c.distance_input) require(finite_positive(*c.distance_input), "distance", "must be positive");

  require(c.periods >= 1, "periods", "must be >= 1");
  try {
    SpatialGrid g(c.periods, c.points_per_period);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("points_per_period", e.what());
  }
  require(std::isfinite(c.beta) && c.beta >= 0.0 && c.beta < 1.0, "beta", "must lie in [0, 1)");
  require(c.beta_ensemble >= 0, "beta_ensemble", "must be >= 0");

  require(finite_positive(c.beam_width_m), "beam_width", "must be positive");
  require(c.optical_periods >= kMinBeamPeriods, "optical_periods",
          "must be >= " + std::to_string(kMinBeamPeriods));
  require(c.samples_per_period >= kMinSamplesPerPeriod, "samples_per_period",
          "must be >= " + std::to_string(kMinSamplesPerPeriod));
  require(c.n_kicks >= 1, "n_kicks", "must be >= 1");
  if (c.n_levels) require(*c.n_levels >= 2, "n_levels", "must be >= 2 or continuous");
  require(c.order_span >= 0, "order_span", "must be >= 0");
  require(finite_positive(c.gamma), "gamma", "must be positive");
  require(c.row_height >= 1, "row_height", "must be >= 1");

  require(finite_positive(c.scan_step), "scan_step", "must be positive");
  require(finite_positive(c.scan_min), "scan_min", "must be positive");
  require(std::isfinite(c.scan_max) && c.scan_max >= c.scan_min, "scan_max", "must be >= scan_min");
  require(!c.kicks_at.empty(), "kicks_at", "must list at least one kick count");
  for (int k : c.kicks_at) require(k >= 1, "kicks_at", "kick counts must be >= 1");

  require(finite_positive(c.compare_beam_width_m), "compare_beam_width", "must be positive");
  require(c.compare_periods >= kMinBeamPeriods, "compare_periods",
          "must be >= " + std::to_string(kMinBeamPeriods));
  for (int l : c.compare_levels) require(l >= 2, "compare_levels", "levels must be >= 2");

  if (c.hbar_input) {
    c.hbar = *c.hbar_input;
    c.distance_m = distance_for_hbar(EffectivePlanck(c.hbar), c.lambda_m, c.period_m);
  } else {
    c.distance_m = c.distance_input.value_or(RunConfig{}.distance_m);
    c.hbar = hbar_from_geometry(c.geometry()).value();
  }
}

}  // namespace

double parse_pi_number(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    std::string_view head = trim(s.substr(0, s.size() - 2));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    if (head.empty()) return kPi;
    if (head == "-") return -kPi;
    return plain_double(head) * kPi;
  }
  return plain_double(s);
}

RunConfig parse_config(std::string_view text, const Overrides& overrides) {
  std::map<std::string, std::string, std::less<>> values;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key(trim(v.substr(0, eq)));
    if (!values.emplace(key, std::string(trim(v.substr(eq + 1)))).second)
      throw ConfigError(key, "given more than once");
  }
  for (const auto& [k, v] : overrides) values[k] = v;

  RunConfig cfg;
  std::set<std::string, std::less<>> given;
  for (const auto& [key, value] : values) {
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(key, "unknown key");
    try {
      it->second.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
    given.insert(key);
  }
  validate_and_resolve(cfg, given);
  return cfg;
}

std::string to_manifest(const RunConfig& cfg) {
  std::ostringstream os;
  for (const auto& [key, k] : keys())
    if (auto v = k.get(cfg)) os << key << '=' << *v << '\n';
  os << "# derived hbar=" << format_double(cfg.hbar) << '\n';
  os << "# derived distance=" << format_double(cfg.distance_m) << '\n';
  return os.str();
}

FigureSetup RunConfig::figure_setup() const {
  FigureSetup s;
  s.potential = potential();
  s.grid = grid();
  s.beta = beta;
  s.n_kicks = n_kicks;
  s.geometry = geometry();
  s.beam_half_width_m = beam_width_m;
  s.optical_periods = optical_periods;
  s.samples_per_period = samples_per_period;
  s.n_levels = n_levels;
  s.loss_accounting = normalization == Normalization::Loss;
  s.order_span = order_span;
  return s;
}

ScanSpec RunConfig::scan_spec() const {
  ScanSpec s;
  s.hbar_values = hbar_grid(scan_min, scan_max, scan_step);
  s.kicks_at = kicks_at;
  s.potential = potential();
  s.grid = grid();
  s.beta = beta;
  switch (scan_modes) {
    case ScanModes::FixedK: s.modes = {KickMode::FixedK}; break;
    case ScanModes::FixedKickPhase: s.modes = {KickMode::FixedKickPhase}; break;
    case ScanModes::Both: s.modes = {KickMode::FixedK, KickMode::FixedKickPhase}; break;
  }
  s.kick_phase_ratio = K / hbar;
  return s;
}

CompareSpec RunConfig::compare_spec() const {
  CompareSpec s;
  s.potential = potential();
  s.hbar = hbar;
  s.geometry = geometry();
  s.grid = grid();
  s.beam_half_width_m = compare_beam_width_m;
  s.optical_periods = compare_periods;
  s.sweep_half_width_m = beam_width_m;
  s.sweep_periods = optical_periods;
  s.samples_per_period = samples_per_period;
  s.n_kicks = n_kicks;
  s.levels = compare_levels;
  return s;
}

}  // namespace ratchet
