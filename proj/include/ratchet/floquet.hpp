#pragma once

// One-period propagator in a truncated momentum basis n in [-n_max, n_max].
// This is an independent route to the dynamics of evolution.hpp: the kick is
// a dense Toeplitz matrix of Fourier coefficients computed by direct
// quadrature, and no FFT is involved.

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "ratchet/evolution.hpp"
#include "ratchet/model.hpp"

namespace ratchet {

struct FloquetMatrix {
  int n_max = 0;
  double beta = 0.0;
  double hbar = 1.0;
  Eigen::MatrixXcd entries;

  int dimension() const noexcept { return 2 * n_max + 1; }
  /// max |(U^dagger U - I)_{nm}| over |n|, |m| <= n_max / 2.
  double interior_unitarity_defect() const;
};

inline constexpr int kMinFloquetHalfWidth = 8;
inline constexpr double kTruncationBreachLimit = 1e-8;

/// K(n, m) = (1/2pi) int exp(-i K v(x)/hbar) exp(-i (n - m) x) dx, quadrature on 8 n_max points.
Eigen::MatrixXcd build_kick_matrix(const RatchetPotential& pot, EffectivePlanck hbar, int n_max);

/// U = D K with D_nn = exp(-i hbar (n + beta)^2 / 2).
FloquetMatrix build_floquet(const RatchetPotential& pot, EffectivePlanck hbar, double beta, int n_max);

/// Applies U `n_kicks` times to `initial` (index n + n_max). Throws NumericalFailure
/// when more than 1e-8 probability reaches the outer quarter of the basis.
MomentumLadder propagate(const FloquetMatrix& u, const std::vector<cplx>& initial, int n_kicks);

/// Same, reporting the post-kick distribution after every period (kick index from 1).
std::vector<MomentumLadder> propagate_trajectory(const FloquetMatrix& u,
                                                 const std::vector<cplx>& initial, int n_kicks);

/// Eigenvalues of U whose unit eigenvectors keep all but `leak` of their weight
/// on |n| <= n_max/2. Those states never see the truncation edge, so their
/// eigenvalues sit on the unit circle.
std::vector<cplx> interior_eigenvalues(const FloquetMatrix& u, double leak = 1e-12);

/// Basis vector for momentum order `order`.
std::vector<cplx> floquet_basis_state(int n_max, int order);

/// Debug dump: one `n m re im` row per entry.
void write_matrix(std::ostream& os, const FloquetMatrix& u);

}  // namespace ratchet
