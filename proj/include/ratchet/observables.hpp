#pragma once

// Momentum statistics and least-squares fits over per-kick spectra.

#include <span>
#include <vector>

#include "ratchet/evolution.hpp"

namespace ratchet {

/// Moments in ladder units (n/M + beta); multiply by hbar for physical momentum.
struct StepStats {
  int kick = 0;
  double mean_p = 0.0;
  double mean_p2 = 0.0;
  double participation = 1.0;  // 1 / sum P^2
};

struct FitResult {
  std::vector<double> coefficients;  // low order first, in the raw abscissa
  double r_squared = 0.0;
  double residual_rms = 0.0;

  double operator()(double x) const;
};

double mean_momentum(const MomentumLadder& ladder);
double mean_square_momentum(const MomentumLadder& ladder);
double participation_ratio(const MomentumLadder& ladder);
StepStats step_stats(int kick, const MomentumLadder& ladder);

/// Least squares of degree 1 or 2 on a centred, scaled abscissa.
/// Throws std::invalid_argument for too few points or a degenerate abscissa.
FitResult polynomial_fit(std::span<const double> xs, std::span<const double> ys, int degree);

/// Total-variation distance: half the L1 difference, aligned by momentum order.
double distribution_distance(const MomentumLadder& a, const MomentumLadder& b);
/// Largest per-order absolute difference.
double linf_distance(const MomentumLadder& a, const MomentumLadder& b);

/// Indices i where values[i] >= both neighbours (end points compare to their one neighbour).
std::vector<std::size_t> local_maxima(std::span<const double> values);

}  // namespace ratchet
