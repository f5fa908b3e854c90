#include "ratchet/floquet.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ratchet/errors.hpp"
#include "ratchet/numfmt.hpp"

namespace ratchet {

namespace {

void check_half_width(int n_max) {
  if (n_max < kMinFloquetHalfWidth) throw std::invalid_argument("n_max must be >= 8");
}

// c_j for j in [-2 n_max, 2 n_max], index j + 2 n_max. Plain Riemann sum on Q
// equispaced points, which is exact for trigonometric polynomials of degree < Q
// and spectrally accurate for the analytic kick factor.
std::vector<cplx> kick_coefficients(const RatchetPotential& pot, EffectivePlanck hbar, int n_max) {
  const int q = 8 * n_max;
  const double scale = -pot.K / hbar.value();
  std::vector<double> kick_phase(static_cast<std::size_t>(q));
  std::vector<double> xs(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    xs[static_cast<std::size_t>(k)] = kTwoPi * k / q;
    kick_phase[static_cast<std::size_t>(k)] = scale * eval_potential(pot, xs[static_cast<std::size_t>(k)]);
  }
  const int span = 2 * n_max;
  std::vector<cplx> c(static_cast<std::size_t>(2 * span + 1));
  for (int j = -span; j <= span; ++j) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < q; ++k) {
      // exp(-i j x_k) with j*k reduced mod q keeps the argument small.
      const long long jk = (static_cast<long long>(j) * k % q + q) % q;
      acc += std::polar(1.0, kick_phase[static_cast<std::size_t>(k)] - kTwoPi * static_cast<double>(jk) / q);
    }
    c[static_cast<std::size_t>(j + span)] = acc / static_cast<double>(q);
  }
  return c;
}

}  // namespace

double FloquetMatrix::interior_unitarity_defect() const {
  const int half = n_max / 2;
  const int lo = n_max - half;
  const int len = 2 * half + 1;
  const Eigen::MatrixXcd gram = entries.adjoint() * entries;
  const Eigen::MatrixXcd block = gram.block(lo, lo, len, len) - Eigen::MatrixXcd::Identity(len, len);
  return block.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd build_kick_matrix(const RatchetPotential& pot, EffectivePlanck hbar, int n_max) {
  check_half_width(n_max);
  pot.validate();
  const auto c = kick_coefficients(pot, hbar, n_max);
  const int dim = 2 * n_max + 1;
  Eigen::MatrixXcd k(dim, dim);
  for (int row = 0; row < dim; ++row)
    for (int col = 0; col < dim; ++col)
      k(row, col) = c[static_cast<std::size_t>(row - col + 2 * n_max)];
  return k;
}

FloquetMatrix build_floquet(const RatchetPotential& pot, EffectivePlanck hbar, double beta, int n_max) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
  FloquetMatrix u;
  u.n_max = n_max;
  u.beta = beta;
  u.hbar = hbar.value();
  u.entries = build_kick_matrix(pot, hbar, n_max);
  for (int row = 0; row < u.dimension(); ++row) {
    const double q = static_cast<double>(row - n_max) + beta;
    u.entries.row(row) *= std::polar(1.0, -hbar.value() * q * q / 2.0);
  }
  return u;
}

std::vector<cplx> interior_eigenvalues(const FloquetMatrix& u, double leak) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u.entries, true);
  if (solver.info() != Eigen::Success) throw NumericalFailure("Floquet eigensolver did not converge");
  const int half = u.n_max / 2;
  std::vector<cplx> out;
  for (int k = 0; k < u.dimension(); ++k) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(k).normalized();
    double outside = 0.0;
    for (int i = 0; i < u.dimension(); ++i)
      if (std::abs(i - u.n_max) > half) outside += std::norm(v(i));
    if (outside <= leak) out.push_back(solver.eigenvalues()(k));
  }
  return out;
}

std::vector<cplx> floquet_basis_state(int n_max, int order) {
  if (std::abs(order) > n_max) throw std::invalid_argument("order outside Floquet basis");
  std::vector<cplx> v(static_cast<std::size_t>(2 * n_max + 1));
  v[static_cast<std::size_t>(order + n_max)] = 1.0;
  return v;
}

namespace {

MomentumLadder to_ladder(const FloquetMatrix& u, const Eigen::VectorXcd& c) {
  MomentumLadder out;
  out.beta = u.beta;
  out.periods = 1;
  out.hbar = u.hbar;
  const int dim = u.dimension();
  out.orders.resize(static_cast<std::size_t>(dim));
  out.prob.resize(static_cast<std::size_t>(dim));
  const double total = c.squaredNorm();
  for (int i = 0; i < dim; ++i) {
    out.orders[static_cast<std::size_t>(i)] = i - u.n_max;
    out.prob[static_cast<std::size_t>(i)] = std::norm(c(i)) / total;
  }
  return out;
}

double outer_quarter_probability(const FloquetMatrix& u, const Eigen::VectorXcd& c) {
  const int edge = (3 * u.n_max) / 4;
  double p = 0.0;
  for (int i = 0; i < u.dimension(); ++i)
    if (std::abs(i - u.n_max) > edge) p += std::norm(c(i));
  return p;
}

}  // namespace

std::vector<MomentumLadder> propagate_trajectory(const FloquetMatrix& u,
                                                 const std::vector<cplx>& initial, int n_kicks) {
  if (static_cast<int>(initial.size()) != u.dimension())
    throw std::invalid_argument("initial state does not match the Floquet basis");
  if (n_kicks < 0) throw std::invalid_argument("n_kicks must be >= 0");
  for (int i = 0; i < u.dimension(); ++i)
    if (std::abs(i - u.n_max) > u.n_max / 4 && initial[static_cast<std::size_t>(i)] != cplx{})
      throw std::invalid_argument("initial state must be supported on |n| <= n_max/4");

  Eigen::VectorXcd c(u.dimension());
  for (int i = 0; i < u.dimension(); ++i) c(i) = initial[static_cast<std::size_t>(i)];
  c /= c.norm();

  std::vector<MomentumLadder> out;
  out.reserve(static_cast<std::size_t>(n_kicks));
  for (int k = 1; k <= n_kicks; ++k) {
    c = u.entries * c;
    const double breach = outer_quarter_probability(u, c);
    if (breach > kTruncationBreachLimit)
      throw NumericalFailure("Floquet basis truncation breached after kick " + std::to_string(k) +
                             " (outer-quarter probability " + format_double(breach) + ")");
    out.push_back(to_ladder(u, c));
  }
  return out;
}

MomentumLadder propagate(const FloquetMatrix& u, const std::vector<cplx>& initial, int n_kicks) {
  if (n_kicks == 0) {
    Eigen::VectorXcd c(u.dimension());
    for (int i = 0; i < u.dimension(); ++i) c(i) = initial.at(static_cast<std::size_t>(i));
    return to_ladder(u, c);
  }
  auto traj = propagate_trajectory(u, initial, n_kicks);
  return std::move(traj.back());
}

void write_matrix(std::ostream& os, const FloquetMatrix& u) {
  for (int row = 0; row < u.dimension(); ++row)
    for (int col = 0; col < u.dimension(); ++col) {
      const cplx v = u.entries(row, col);
      os << row - u.n_max << ' ' << col - u.n_max << ' ' << format_double(v.real()) << ' '
         << format_double(v.imag()) << '\n';
    }
}

}  // namespace ratchet
