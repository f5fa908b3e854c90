#pragma once

// Scenario drivers: per-kick trajectories for the two headline hbar values,
// momentum statistics with fits, the hbar scan, and the quantum/optical
// engine comparison including the mirror-quantization sweep.

#include <optional>
#include <string>
#include <vector>

#include "ratchet/evolution.hpp"
#include "ratchet/observables.hpp"
#include "ratchet/optics.hpp"

namespace ratchet {

inline constexpr double kResonantHbar = 0.5 * kPi;
inline constexpr double kOffResonantHbar = 0.35 * kPi;

enum class Engine { Quantum, Optical, Both };

struct FigureSetup {
  RatchetPotential potential;  // K = 1, alpha = 0.3, phi = 0
  SpatialGrid grid{1, 256};
  double beta = 0.0;
  int n_kicks = 22;
  OpticalGeometry geometry;  // distance_m is replaced per hbar
  double beam_half_width_m = 3e-3;
  int optical_periods = 32;
  int samples_per_period = 128;
  std::optional<int> n_levels;
  bool loss_accounting = false;
  int order_span = 40;
};

/// Post-kick spectra for kicks 1..n_kicks from a plane wave of quasimomentum beta.
std::vector<MomentumLadder> quantum_trajectory(const RatchetPotential& pot, EffectivePlanck hbar,
                                               const SpatialGrid& grid, double beta, int n_kicks);

/// Geometry with the mirror-lens gap set so that hbar_from_geometry returns `hbar`.
OpticalGeometry geometry_for(const OpticalGeometry& base, EffectivePlanck hbar);

/// Bounce simulation of the ratchet mirror (ideal or quantized) at `hbar`.
FarFieldImage optical_trajectory(const FigureSetup& setup, EffectivePlanck hbar,
                                 std::optional<int> n_levels, double beam_half_width_m,
                                 int optical_periods);

/// Uniform-beta ensemble of `n_beta` members, beta_j = j / n_beta; stats averaged per kick.
std::vector<StepStats> ensemble_stats(const RatchetPotential& pot, EffectivePlanck hbar,
                                      const SpatialGrid& grid, int n_beta, int n_kicks);

struct Fig2Panel {
  double hbar = 0.0;
  std::vector<MomentumLadder> quantum;
  std::optional<FarFieldImage> optical;
};

struct Fig2Result {
  Fig2Panel resonant;      // panel (a)
  Fig2Panel off_resonant;  // panel (b)
};

Fig2Result run_fig2(const FigureSetup& setup, Engine engine);

struct Fig3Series {
  double hbar = 0.0;
  std::vector<StepStats> stats;
  MomentumLadder final_distribution;
};

struct Fig3Result {
  Fig3Series resonant;
  Fig3Series off_resonant;
  FitResult resonant_mean_linear;    // kicks 2..n
  FitResult resonant_p2_quadratic;   // kicks 1..n
  double p2_ratio = 0.0;             // off-resonant / resonant <p^2> at the last kick
};

Fig3Result run_fig3(const FigureSetup& setup);

enum class KickMode { FixedK, FixedKickPhase };

std::string to_string(KickMode mode);

struct ScanSpec {
  std::vector<double> hbar_values;
  std::vector<int> kicks_at{21, 5};
  RatchetPotential potential;
  SpatialGrid grid{1, 256};
  double beta = 0.0;
  std::vector<KickMode> modes{KickMode::FixedK};
  /// K / hbar used by FixedKickPhase.
  double kick_phase_ratio = 1.0 / kResonantHbar;

  void validate() const;
};

/// k * step for k = round(lo / step) .. round(hi / step).
std::vector<double> hbar_grid(double lo, double hi, double step);

struct ScanRecord {
  KickMode mode = KickMode::FixedK;
  double hbar = 0.0;
  int kicks = 0;
  double mean_p = 0.0;
};

/// Records sorted by (mode, hbar, kicks). Scan points run concurrently.
std::vector<ScanRecord> run_fig4(const ScanSpec& scan);
/// Single-threaded reference with identical output.
std::vector<ScanRecord> run_fig4_serial(const ScanSpec& scan);

/// hbar values at local maxima of |<p>| for one (mode, kicks) curve.
std::vector<double> scan_peaks(const std::vector<ScanRecord>& records, KickMode mode, int kicks);

struct CompareSpec {
  RatchetPotential potential;
  double hbar = kResonantHbar;
  OpticalGeometry geometry;
  SpatialGrid grid{1, 256};
  // Wide beam for the quantum/optical rows of the continuous mirror.
  double beam_half_width_m = 30e-3;
  int optical_periods = 256;
  // Figure beam for the quantization sweep; its continuous-mirror run is the sweep reference.
  double sweep_half_width_m = 3e-3;
  int sweep_periods = 32;
  int samples_per_period = 128;
  int n_kicks = 22;
  std::vector<int> levels{2, 4, 8, 16, 32, 64};
};

struct CompareRow {
  std::string mirror;  // "continuous" or "levels_<n>"
  int kick = 0;
  double linf_vs_quantum = 0.0;
  double tv_vs_quantum = 0.0;
  double tv_vs_continuous = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<std::pair<int, double>> final_tv_by_levels;  // last-kick TV vs continuous mirror
  double max_linf_continuous = 0.0;
};

CompareResult compare_engines(const CompareSpec& spec);

/// Caps OpenMP threads for scans; 0 leaves the runtime default.
void set_thread_cap(int threads);

}  // namespace ratchet
