#include <doctest.h>

#include <cmath>
#include <random>

#include "ratchet/errors.hpp"
#include "ratchet/evolution.hpp"
#include "ratchet/observables.hpp"

using namespace ratchet;

namespace {

MomentumLadder after_kicks(const WaveState& s0, const RatchetPotential& pot, double hbar, int kicks) {
  MomentumLadder last;
  evolve(s0, KickedRunParams{pot, EffectivePlanck(hbar), kicks},
         [&](int, const MomentumLadder& l) { last = l; });
  return last;
}

// <dv/dx> under the position density |u|^2 dx.
double mean_force(const WaveState& s, const RatchetPotential& pot) {
  double acc = 0.0;
  for (std::size_t j = 0; j < s.amplitudes.size(); ++j) {
    const double x = s.grid.x(j);
    const double dv = std::cos(x) + 2.0 * pot.alpha * std::cos(2.0 * x + pot.phi);
    acc += std::norm(s.amplitudes[j]) * dv * s.grid.dx();
  }
  return acc;
}

WaveState random_packet(const SpatialGrid& g, double beta, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::map<int, cplx> c;
  for (int k = -4; k <= 4; ++k) c[k] = {n(rng), n(rng)};
  return momentum_superposition(g, c, beta);
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(SpatialGrid(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(SpatialGrid(1, 7), std::invalid_argument);
  CHECK_THROWS_AS(SpatialGrid(0, 256), std::invalid_argument);
  CHECK_NOTHROW(SpatialGrid(4, 8));
  CHECK(SpatialGrid(2, 64).size() == 128);
}

TEST_CASE("initial states") {
  const SpatialGrid g(1, 64);
  const auto pw = plane_wave(g, 3, 0.25);
  CHECK(pw.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const auto l = momentum_spectrum(pw, EffectivePlanck(1.0));
  CHECK(l.at(3) == doctest::Approx(1.0));
  CHECK(l.momentum(std::size_t(std::find(l.orders.begin(), l.orders.end(), 3) - l.orders.begin())) ==
        doctest::Approx(3.25));
  CHECK(std::is_sorted(l.orders.begin(), l.orders.end()));
  CHECK_THROWS_AS(plane_wave(g, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(plane_wave(g, 0, -0.1), std::invalid_argument);
}

TEST_CASE("single kick matches the Bessel distribution") {
  const SpatialGrid g(1, 256);
  for (double ratio : {0.5, 1.0, 2.0}) {
    const double hbar = 0.7;
    const RatchetPotential pot{ratio * hbar, 0.0, 0.0};
    const auto l = after_kicks(plane_wave(g), pot, hbar, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < l.orders.size(); ++i) {
      const int n = l.orders[i];
      const double j = std::cyl_bessel_j(static_cast<double>(std::abs(n)), ratio);
      worst = std::max(worst, std::abs(l.prob[i] - j * j));
    }
    CHECK(worst < 1e-10);
    CHECK(mean_square_momentum(l) == doctest::Approx(ratio * ratio / 2).epsilon(1e-10));
  }
}

TEST_CASE("at hbar = 4 pi kicks accumulate into one Bessel distribution") {
  const SpatialGrid g(1, 256);
  const double hbar = 4.0 * kPi;
  const RatchetPotential pot{2.0, 0.0, 0.0};
  const int kicks = 7;
  const auto l = after_kicks(plane_wave(g), pot, hbar, kicks);
  const double arg = kicks * pot.K / hbar;
  for (std::size_t i = 0; i < l.orders.size(); ++i) {
    const double j = std::cyl_bessel_j(static_cast<double>(std::abs(l.orders[i])), arg);
    CHECK(std::abs(l.prob[i] - j * j) < 1e-10);
  }
}

TEST_CASE("momentum change across a kick equals the mean force") {
  const SpatialGrid g(1, 256);
  const RatchetPotential pot{1.3, 0.3, 0.7};
  const EffectivePlanck h(1.1);
  for (double beta : {0.0, 0.37}) {
    WaveState s = random_packet(g, beta, 3);
    for (int step = 0; step < 4; ++step) {
      const double before = mean_momentum(momentum_spectrum(s, h));
      const double expected = -pot.K / h.value() * mean_force(s, pot);
      s = kick_step(std::move(s), pot, h);
      const double after = mean_momentum(momentum_spectrum(s, h));
      CHECK(after - before == doctest::Approx(expected).epsilon(1e-9));
      s = free_step(std::move(s), h);
    }
  }
}

TEST_CASE("free flight leaves the spectrum unchanged") {
  const SpatialGrid g(1, 128);
  const EffectivePlanck h(0.9);
  const auto s = random_packet(g, 0.2, 5);
  const auto a = momentum_spectrum(s, h);
  const auto b = momentum_spectrum(free_step(s, h), h);
  CHECK(linf_distance(a, b) < 1e-14);
}

TEST_CASE("norm is conserved over many kicks") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uk(0.0, 5.0), uh(0.05, 4 * kPi), ub(0.0, 1.0);
  const SpatialGrid g(1, 256);
  for (int trial = 0; trial < 5; ++trial) {
    const RatchetPotential pot{uk(rng), 0.3, 0.0};
    const auto s = evolve(plane_wave(g, 0, ub(rng)), KickedRunParams{pot, EffectivePlanck(uh(rng)), 100});
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    CHECK(s.kick_count == 100);
  }
}

TEST_CASE("inverse period undoes a period") {
  const SpatialGrid g(1, 128);
  const RatchetPotential pot{1.0, 0.3, 0.2};
  const EffectivePlanck h(0.5 * kPi);
  const auto s0 = random_packet(g, 0.1, 8);
  auto s = evolve(s0, KickedRunParams{pot, h, 1});
  s = inverse_period(std::move(s), pot, h);
  for (std::size_t j = 0; j < s0.amplitudes.size(); ++j)
    CHECK(std::abs(s.amplitudes[j] - s0.amplitudes[j]) < 1e-13);
}

TEST_CASE("results do not depend on grid refinement") {
  const RatchetPotential pot;
  const double hbar = 0.5 * kPi;
  const auto coarse = after_kicks(plane_wave(SpatialGrid(1, 256)), pot, hbar, 22);
  const auto fine = after_kicks(plane_wave(SpatialGrid(1, 1024)), pot, hbar, 22);
  CHECK(linf_distance(coarse, fine) < 1e-12);
}

TEST_CASE("a two-period grid reproduces the one-period ladder on even orders") {
  const RatchetPotential pot;
  const double hbar = 0.35 * kPi;
  const auto one = after_kicks(plane_wave(SpatialGrid(1, 256)), pot, hbar, 10);
  const auto two = after_kicks(plane_wave(SpatialGrid(2, 256)), pot, hbar, 10);
  CHECK(two.periods == 2);
  for (std::size_t i = 0; i < two.orders.size(); ++i) {
    const int n = two.orders[i];
    if (n % 2 == 0) CHECK(std::abs(two.prob[i] - one.at(n / 2)) < 1e-12);
    else CHECK(two.prob[i] < 1e-14);
  }
  CHECK(mean_momentum(two) == doctest::Approx(mean_momentum(one)).epsilon(1e-12));
}

TEST_CASE("no kick strength means no dynamics") {
  const auto l = after_kicks(plane_wave(SpatialGrid(1, 64), 2), RatchetPotential{0.0, 0.3, 0.0}, 1.0, 5);
  CHECK(l.at(2) == doctest::Approx(1.0));
}

TEST_CASE("symmetric potential gives zero current from a symmetric state") {
  const RatchetPotential pot{1.0, 0.0, 0.0};
  for (double hbar : {0.5 * kPi, 0.35 * kPi, 1.3}) {
    const auto l = after_kicks(plane_wave(SpatialGrid(1, 256)), pot, hbar, 22);
    CHECK(std::abs(mean_momentum(l)) < 1e-10);
  }
}

TEST_CASE("propagator and evolve agree") {
  const SpatialGrid g(1, 128);
  const RatchetPotential pot;
  const EffectivePlanck h(1.7);
  SplitStepPropagator prop(g, pot, h, 0.3);
  auto amps = plane_wave(g, 0, 0.3).amplitudes;
  std::vector<double> raw(g.size());
  std::vector<MomentumLadder> via_prop;
  for (int k = 0; k < 6; ++k) {
    prop.period(amps, raw);
    via_prop.push_back(prop.ladder_from_raw(raw));
  }
  int k = 0;
  evolve(plane_wave(g, 0, 0.3), KickedRunParams{pot, h, 6}, [&](int kick, const MomentumLadder& l) {
    CHECK(kick == k + 1);
    CHECK(l.prob == via_prop[static_cast<std::size_t>(k)].prob);
    ++k;
  });
  CHECK(k == 6);
}

TEST_CASE("evolve rejects bad input") {
  const SpatialGrid g(1, 64);
  auto s = plane_wave(g);
  s.amplitudes[0] *= 2.0;
  CHECK_THROWS_AS(evolve(s, KickedRunParams{}), std::invalid_argument);
  auto nan = plane_wave(g);
  nan.amplitudes[3] = {NAN, 0.0};
  CHECK_THROWS_AS(evolve(nan, KickedRunParams{}), std::invalid_argument);
  KickedRunParams bad;
  bad.n_kicks = -1;
  CHECK_THROWS_AS(evolve(plane_wave(g), bad), std::invalid_argument);
}
