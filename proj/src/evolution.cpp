#include "ratchet/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ratchet/errors.hpp"
#include "ratchet/kernels.hpp"

namespace ratchet {

SpatialGrid::SpatialGrid(int periods_, int points_per_period_)
    : periods(periods_), points_per_period(points_per_period_) {
  validate();
}

void SpatialGrid::validate() const {
  if (periods < 1) throw std::invalid_argument("grid needs at least one period");
  if (points_per_period < 8 || points_per_period % 2 != 0)
    throw std::invalid_argument("points_per_period must be even and >= 8");
  if (size() < 32) throw std::invalid_argument("grid needs at least 32 points");
}

std::vector<double> SpatialGrid::xs() const {
  std::vector<double> out(size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x(j);
  return out;
}

double SpatialGrid::ladder_value(std::size_t i, double beta) const noexcept {
  return static_cast<double>(signed_bin(i, size())) / periods + beta;
}

double WaveState::norm() const { return kernels::sum_abs2(amplitudes) * grid.dx(); }

namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("quasimomentum beta must lie in [0, 1)");
}

std::size_t bin_of(int order, std::size_t n) {
  const auto ln = static_cast<long long>(n);
  const long long o = order;
  if (o < -ln / 2 || o >= ln - ln / 2) throw std::invalid_argument("momentum order outside grid");
  return static_cast<std::size_t>((o % ln + ln) % ln);
}

void normalize(WaveState& s) {
  const double nrm = s.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("cannot normalize a zero state");
  const double scale = 1.0 / std::sqrt(nrm);
  for (auto& a : s.amplitudes) a *= scale;
}

std::vector<double> ladder_values(const SpatialGrid& grid, double beta) {
  std::vector<double> q(grid.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = grid.ladder_value(i, beta);
  return q;
}

MomentumLadder ladder_from_power(std::span<const double> raw, double beta, int periods, double hbar) {
  const std::size_t n = raw.size();
  MomentumLadder out;
  out.beta = beta;
  out.periods = periods;
  out.hbar = hbar;
  out.orders.resize(n);
  out.prob.resize(n);
  double total = 0.0;
  for (double v : raw) total += v;
  const auto half = static_cast<long long>(n / 2);
  const auto ln = static_cast<long long>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long long order = static_cast<long long>(k) - half;
    out.orders[k] = static_cast<int>(order);
    out.prob[k] = raw[static_cast<std::size_t>((order + ln) % ln)] / total;
  }
  return out;
}

}  // namespace

WaveState plane_wave(const SpatialGrid& grid, int order, double beta) {
  return momentum_superposition(grid, {{order, cplx{1.0, 0.0}}}, beta);
}

WaveState momentum_superposition(const SpatialGrid& grid, const std::map<int, cplx>& coefficients,
                                 double beta) {
  grid.validate();
  check_beta(beta);
  WaveState s;
  s.grid = grid;
  s.beta = beta;
  std::vector<cplx> spec(grid.size());
  for (const auto& [order, c] : coefficients) spec[bin_of(order, grid.size())] = c;
  Fft fft(grid.size());
  fft.inverse(spec);
  s.amplitudes = std::move(spec);
  normalize(s);
  return s;
}

double MomentumLadder::at(int order) const noexcept {
  auto it = std::lower_bound(orders.begin(), orders.end(), order);
  if (it == orders.end() || *it != order) return 0.0;
  return prob[static_cast<std::size_t>(it - orders.begin())];
}

double MomentumLadder::total() const {
  double s = 0.0;
  for (double p : prob) s += p;
  return s;
}

void KickedRunParams::validate() const {
  potential.validate();
  if (n_kicks < 1) throw std::invalid_argument("n_kicks must be >= 1");
}

SplitStepPropagator::SplitStepPropagator(const SpatialGrid& grid, const RatchetPotential& pot,
                                         EffectivePlanck hbar, double beta)
    : grid_(grid), beta_(beta), hbar_(hbar.value()), fft_(grid.size()),
      kick_(grid.size()), free_(grid.size()) {
  grid_.validate();
  check_beta(beta);
  const auto phase = kick_phase_profile(pot, hbar, grid_.xs());
  kernels::unimodular(phase, kick_);
  kernels::quadratic_phase(ladder_values(grid_, beta_), hbar_ / 2.0, free_);
}

void SplitStepPropagator::period(std::span<cplx> amplitudes, std::span<double> post_kick_prob) {
  kernels::multiply(amplitudes, kick_);
  fft_.forward(amplitudes);
  if (!post_kick_prob.empty()) kernels::abs2(amplitudes, post_kick_prob);
  kernels::multiply(amplitudes, free_);
  fft_.inverse(amplitudes);
}

MomentumLadder SplitStepPropagator::ladder_from_raw(std::span<const double> raw) const {
  return ladder_from_power(raw, beta_, grid_.periods, hbar_);
}

WaveState kick_step(WaveState state, const RatchetPotential& pot, EffectivePlanck hbar) {
  const auto phase = kick_phase_profile(pot, hbar, state.grid.xs());
  return kick_with_phase(std::move(state), phase);
}

WaveState kick_with_phase(WaveState state, std::span<const double> phase) {
  if (phase.size() != state.amplitudes.size())
    throw std::invalid_argument("kick phase must be sampled on the state grid");
  std::vector<cplx> factor(phase.size());
  kernels::unimodular(phase, factor);
  kernels::multiply(state.amplitudes, factor);
  return state;
}

WaveState free_step(WaveState state, EffectivePlanck hbar) {
  Fft fft(state.grid.size());
  std::vector<cplx> factor(state.grid.size());
  kernels::quadratic_phase(ladder_values(state.grid, state.beta), hbar.value() / 2.0, factor);
  fft.forward(state.amplitudes);
  kernels::multiply(state.amplitudes, factor);
  fft.inverse(state.amplitudes);
  return state;
}

MomentumLadder momentum_spectrum(const WaveState& state, EffectivePlanck hbar) {
  std::vector<cplx> spec = state.amplitudes;
  Fft fft(spec.size());
  fft.forward(spec);
  std::vector<double> raw(spec.size());
  kernels::abs2(spec, raw);
  return ladder_from_power(raw, state.beta, state.grid.periods, hbar.value());
}

WaveState evolve(WaveState state, const KickedRunParams& params, const SpectrumSink& sink) {
  params.validate();
  const double norm0 = state.norm();
  if (!(std::abs(norm0 - 1.0) <= kNormDriftLimit))
    throw std::invalid_argument("evolve requires a normalized state");

  SplitStepPropagator prop(state.grid, params.potential, params.hbar, state.beta);
  std::vector<double> raw(sink ? state.grid.size() : 0);
  for (int k = 1; k <= params.n_kicks; ++k) {
    prop.period(state.amplitudes, raw);
    ++state.kick_count;
    if (sink) sink(state.kick_count, prop.ladder_from_raw(raw));
    const double drift = std::abs(state.norm() - 1.0);
    if (!(drift <= kNormDriftLimit))
      throw NumericalFailure("norm drift " + std::to_string(drift) + " after kick " +
                             std::to_string(state.kick_count));
  }
  return state;
}

WaveState inverse_period(WaveState state, const RatchetPotential& pot, EffectivePlanck hbar) {
  Fft fft(state.grid.size());
  std::vector<cplx> factor(state.grid.size());
  // exp(+i hbar q^2 / 2) is the quadratic phase with a negated scale.
  kernels::quadratic_phase(ladder_values(state.grid, state.beta), -hbar.value() / 2.0, factor);
  fft.forward(state.amplitudes);
  kernels::multiply(state.amplitudes, factor);
  fft.inverse(state.amplitudes);

  auto phase = kick_phase_profile(pot, hbar, state.grid.xs());
  for (double& p : phase) p = -p;
  return kick_with_phase(std::move(state), phase);
}

}  // namespace ratchet
