#pragma once

// Flat key=value run configuration shared by every ratchet-lab subcommand.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratchet/experiments.hpp"

namespace ratchet {

enum class Normalization { Row, Loss };
enum class ScanModes { FixedK, FixedKickPhase, Both };

struct RunConfig {
  Engine engine = Engine::Both;

  double K = 1.0;
  double alpha = 0.3;
  double phi = 0.0;

  // At most one of these is supplied; the resolved pair is always consistent.
  std::optional<double> hbar_input;
  std::optional<double> distance_input;
  double hbar = 0.5 * kPi;
  double distance_m = 0.169172;

  double lambda_m = 532e-9;
  double period_m = 600e-6;
  double focal_m = 0.3;
  double reflectivity = 0.95;

  int periods = 1;
  int points_per_period = 256;
  double beta = 0.0;
  int beta_ensemble = 0;  // 0: single beta; n: beta_j = j/n averaged

  double beam_width_m = 3e-3;
  int optical_periods = 32;
  int samples_per_period = 128;
  int n_kicks = 22;
  std::optional<int> n_levels;  // empty: continuous mirror
  Normalization normalization = Normalization::Row;
  int order_span = 40;
  double gamma = 0.5;
  int row_height = 8;

  ScanModes scan_modes = ScanModes::FixedK;
  double scan_min = 0.02 * kPi;
  double scan_max = 2.0 * kPi;
  double scan_step = 0.02 * kPi;
  std::vector<int> kicks_at{21, 5};

  double compare_beam_width_m = 30e-3;
  int compare_periods = 256;
  std::vector<int> compare_levels{2, 4, 8, 16, 32, 64};

  std::string out;

  bool operator==(const RunConfig&) const = default;

  RatchetPotential potential() const { return {K, alpha, phi}; }
  OpticalGeometry geometry() const { return {lambda_m, period_m, distance_m, focal_m, reflectivity}; }
  SpatialGrid grid() const { return {periods, points_per_period}; }
  FigureSetup figure_setup() const;
  ScanSpec scan_spec() const;
  CompareSpec compare_spec() const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses `text` (key=value lines, `#` comments), applies `overrides` on top,
/// validates, and resolves hbar/distance. Throws ConfigError naming the key.
RunConfig parse_config(std::string_view text, const Overrides& overrides = {});

/// Accepts plain numbers and pi multiples: `pi`, `0.5pi`, `0.5*pi`, `-pi`.
double parse_pi_number(std::string_view text);

/// Every parameter as key=value, derived quantities as comments; parse_config
/// of the result reproduces `cfg`.
std::string to_manifest(const RunConfig& cfg);

}  // namespace ratchet
