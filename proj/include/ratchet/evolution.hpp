#pragma once

// Split-operator propagation of the kicked wave equation on a periodic grid.
// One period is a delta kick (pointwise phase in x) followed by unit-time free
// flight (diagonal phase in momentum).

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "ratchet/fft.hpp"
#include "ratchet/model.hpp"

namespace ratchet {

/// Uniform periodic grid over `periods` copies of [0, 2 pi).
struct SpatialGrid {
  int periods = 1;
  int points_per_period = 256;

  SpatialGrid() = default;
  SpatialGrid(int periods_, int points_per_period_);

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(periods) * static_cast<std::size_t>(points_per_period);
  }
  double dx() const noexcept { return kTwoPi / points_per_period; }
  double x(std::size_t j) const noexcept { return dx() * static_cast<double>(j); }
  std::vector<double> xs() const;
  /// Ladder value n/M + beta for the DFT bin `i`.
  double ladder_value(std::size_t i, double beta) const noexcept;
  void validate() const;
};

/// Periodic part u = psi * exp(-i beta x) sampled on the grid.
struct WaveState {
  SpatialGrid grid;
  std::vector<cplx> amplitudes;
  double beta = 0.0;
  int kick_count = 0;

  /// sum |u_j|^2 dx
  double norm() const;
};

/// Normalized single momentum order `order` (in units of 1/M) at quasimomentum beta.
WaveState plane_wave(const SpatialGrid& grid, int order = 0, double beta = 0.0);
/// Normalized superposition of momentum orders; keys are DFT orders.
WaveState momentum_superposition(const SpatialGrid& grid, const std::map<int, cplx>& coefficients,
                                 double beta = 0.0);

/// Probability over discrete momentum orders. Physical momentum of entry i is
/// hbar * (orders[i] / periods + beta).
struct MomentumLadder {
  double beta = 0.0;
  int periods = 1;
  std::vector<int> orders;     // ascending
  std::vector<double> prob;    // same length as orders
  double hbar = 1.0;

  double momentum(std::size_t i) const noexcept {
    return static_cast<double>(orders[i]) / periods + beta;
  }
  /// P(order), zero outside the stored range.
  double at(int order) const noexcept;
  double total() const;
};

struct KickedRunParams {
  RatchetPotential potential;
  EffectivePlanck hbar{kPi / 2.0};
  int n_kicks = 22;

  void validate() const;
};

using SpectrumSink = std::function<void(int kick, const MomentumLadder&)>;

/// Norm drift beyond this aborts evolve with NumericalFailure.
inline constexpr double kNormDriftLimit = 1e-8;

WaveState kick_step(WaveState state, const RatchetPotential& pot, EffectivePlanck hbar);
/// Multiplies by exp(i phase_j); `phase` is sampled on the state grid.
WaveState kick_with_phase(WaveState state, std::span<const double> phase);
WaveState free_step(WaveState state, EffectivePlanck hbar);
MomentumLadder momentum_spectrum(const WaveState& state, EffectivePlanck hbar);

/// n_kicks periods of kick-then-free. The sink sees the spectrum right after
/// each kick. Throws NumericalFailure when the norm drifts past kNormDriftLimit.
WaveState evolve(WaveState state, const KickedRunParams& params, const SpectrumSink& sink = {});

/// Undo one period: inverse free flight, then the conjugate kick.
WaveState inverse_period(WaveState state, const RatchetPotential& pot, EffectivePlanck hbar);

/// Reusable propagator: precomputed kick and free factors plus an FFT plan
/// for one (grid, potential, hbar, beta). `evolve` builds one internally.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const SpatialGrid& grid, const RatchetPotential& pot, EffectivePlanck hbar,
                      double beta);

  /// One period in place; writes the post-kick probabilities (DFT order) into `post_kick_prob`
  /// when it is non-empty.
  void period(std::span<cplx> amplitudes, std::span<double> post_kick_prob);
  MomentumLadder ladder_from_raw(std::span<const double> raw) const;

  const SpatialGrid& grid() const noexcept { return grid_; }

 private:
  SpatialGrid grid_;
  double beta_;
  double hbar_;
  Fft fft_;
  std::vector<cplx> kick_;
  std::vector<cplx> free_;
};

}  // namespace ratchet
