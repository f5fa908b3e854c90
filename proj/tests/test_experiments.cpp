#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ratchet/experiments.hpp"
#include "ratchet/floquet.hpp"

using namespace ratchet;

namespace {

std::vector<MomentumLadder> floquet_trajectory(const RatchetPotential& pot, double hbar, int kicks) {
  const auto u = build_floquet(pot, EffectivePlanck(hbar), 0.0, 128);
  return propagate_trajectory(u, floquet_basis_state(128, 0), kicks);
}

ScanSpec small_scan() {
  ScanSpec s;
  s.hbar_values = hbar_grid(0.1 * kPi, 2 * kPi, 0.1 * kPi);
  s.kicks_at = {21, 5};
  s.grid = SpatialGrid(1, 128);
  return s;
}

}  // namespace

TEST_CASE("no kick strength gives identical rows in both engines") {
  FigureSetup setup;
  setup.potential.K = 0.0;
  const auto r = run_fig2(setup, Engine::Both);
  for (const auto* p : {&r.resonant, &r.off_resonant}) {
    REQUIRE(p->quantum.size() == 22);
    REQUIRE(p->optical.has_value());
    for (const auto& l : p->quantum) CHECK(l.prob == p->quantum.front().prob);
    // Free flight only rephases the spectrum; rows agree up to FFT rounding.
    const auto& first = p->optical->rows.front();
    const double peak = *std::max_element(first.begin(), first.end());
    for (const auto& row : p->optical->rows)
      for (std::size_t c = 0; c < row.size(); ++c) CHECK(std::abs(row[c] - first[c]) < 1e-12 * peak);
  }
}

TEST_CASE("engine selection") {
  FigureSetup setup;
  setup.n_kicks = 3;
  const auto q = run_fig2(setup, Engine::Quantum);
  CHECK_FALSE(q.resonant.optical.has_value());
  CHECK(q.resonant.quantum.size() == 3);
  const auto o = run_fig2(setup, Engine::Optical);
  CHECK(o.resonant.quantum.empty());
  CHECK(o.off_resonant.optical->rows.size() == 3);
}

TEST_CASE("figure trajectories follow the Floquet oracle") {
  FigureSetup setup;
  const auto r = run_fig2(setup, Engine::Quantum);
  for (const auto* p : {&r.resonant, &r.off_resonant}) {
    const auto oracle = floquet_trajectory(setup.potential, p->hbar, 22);
    for (std::size_t k = 0; k < 22; ++k) {
      double mp = 0.0;
      for (std::size_t i = 0; i < oracle[k].orders.size(); ++i) mp += oracle[k].orders[i] * oracle[k].prob[i];
      double got = 0.0;
      for (std::size_t i = 0; i < p->quantum[k].orders.size(); ++i)
        got += p->quantum[k].orders[i] * p->quantum[k].prob[i];
      CHECK(got == doctest::Approx(mp).epsilon(1e-9));
    }
  }
  // The resonant current flows toward positive orders.
  double last = 0.0;
  for (std::size_t i = 0; i < r.resonant.quantum.back().orders.size(); ++i)
    last += r.resonant.quantum.back().orders[i] * r.resonant.quantum.back().prob[i];
  CHECK(last > 0.3);
}

TEST_CASE("fig3 statistics and fits") {
  const auto r = run_fig3(FigureSetup{});
  CHECK(r.resonant.stats.size() == 22);
  CHECK(r.resonant.hbar == kResonantHbar);
  CHECK(r.off_resonant.hbar == kOffResonantHbar);
  CHECK(r.resonant_p2_quadratic.r_squared >= 0.98);
  CHECK(r.resonant_p2_quadratic.coefficients[2] > 0.0);
  CHECK(r.p2_ratio == doctest::Approx(r.off_resonant.stats.back().mean_p2 / r.resonant.stats.back().mean_p2));

  // Fit quality reproduced from the oracle trajectory.
  const auto oracle = floquet_trajectory(RatchetPotential{}, kResonantHbar, 22);
  std::vector<double> ks, ps;
  for (int k = 2; k <= 22; ++k) {
    const auto& l = oracle[static_cast<std::size_t>(k - 1)];
    double mp = 0.0;
    for (std::size_t i = 0; i < l.orders.size(); ++i) mp += l.orders[i] * l.prob[i];
    ks.push_back(k);
    ps.push_back(mp);
  }
  CHECK(r.resonant_mean_linear.r_squared == doctest::Approx(polynomial_fit(ks, ps, 1).r_squared).epsilon(1e-8));
  CHECK(r.resonant.final_distribution.prob == run_fig2(FigureSetup{}, Engine::Quantum).resonant.quantum.back().prob);
}

TEST_CASE("hbar grid") {
  const auto g = hbar_grid(0.02 * kPi, 2 * kPi, 0.02 * kPi);
  REQUIRE(g.size() == 100);
  CHECK(g.front() == doctest::Approx(0.02 * kPi));
  CHECK(g[24] == doctest::Approx(0.5 * kPi).epsilon(1e-15));
  CHECK(g.back() == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(hbar_grid(0.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(hbar_grid(1.0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("scan validation") {
  ScanSpec s = small_scan();
  s.hbar_values = {1.0, 0.5};
  CHECK_THROWS_AS(run_fig4(s), std::invalid_argument);
  s = small_scan();
  s.kicks_at = {0};
  CHECK_THROWS_AS(run_fig4(s), std::invalid_argument);
}

TEST_CASE("concurrent scan is byte-identical to the serial reference") {
  ScanSpec s = small_scan();
  s.modes = {KickMode::FixedKickPhase, KickMode::FixedK};
  const auto par = run_fig4(s);
  const auto ser = run_fig4_serial(s);
  REQUIRE(par.size() == ser.size());
  REQUIRE(par.size() == 2 * 20 * 2);
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].mode == ser[i].mode);
    CHECK(par[i].hbar == ser[i].hbar);
    CHECK(par[i].kicks == ser[i].kicks);
    CHECK(par[i].mean_p == ser[i].mean_p);
  }
  // Sorted by mode, then hbar, then kicks.
  CHECK(par.front().mode == KickMode::FixedK);
  CHECK(par[0].kicks == 5);
  CHECK(par[1].kicks == 21);
  CHECK(par[0].hbar < par[2].hbar);
}

TEST_CASE("fixed kick phase holds K / hbar") {
  ScanSpec s = small_scan();
  s.hbar_values = {0.5 * kPi};
  s.modes = {KickMode::FixedK, KickMode::FixedKickPhase};
  const auto r = run_fig4(s);
  // At the reference hbar both modes use K = 1.
  CHECK(r[0].mean_p == r[2].mean_p);
}

TEST_CASE("scan symmetry probes") {
  ScanSpec s = small_scan();
  s.potential.K = 0.0;
  for (const auto& rec : run_fig4(s)) CHECK(rec.mean_p == 0.0);
  s.potential = RatchetPotential{1.0, 0.0, 0.0};
  for (const auto& rec : run_fig4(s)) CHECK(std::abs(rec.mean_p) < 1e-10);
}

TEST_CASE("scan peaks") {
  std::vector<ScanRecord> recs;
  const std::vector<double> vals{0.1, 0.5, 0.2, -0.9, 0.3};
  for (std::size_t i = 0; i < vals.size(); ++i) recs.push_back({KickMode::FixedK, 0.1 * (i + 1), 21, vals[i]});
  recs.push_back({KickMode::FixedK, 0.1, 5, 9.0});
  const auto peaks = scan_peaks(recs, KickMode::FixedK, 21);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0] == doctest::Approx(0.2));
  CHECK(peaks[1] == doctest::Approx(0.4));
}

TEST_CASE("beta ensemble of one member is the plain run") {
  const RatchetPotential pot;
  const SpatialGrid g(1, 128);
  const auto e = ensemble_stats(pot, EffectivePlanck(1.0), g, 1, 5);
  const auto t = quantum_trajectory(pot, EffectivePlanck(1.0), g, 0.0, 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(e[k].mean_p2 == doctest::Approx(step_stats(1, t[k]).mean_p2));
  CHECK_THROWS_AS(ensemble_stats(pot, EffectivePlanck(1.0), g, 0, 5), std::invalid_argument);
  const auto four = ensemble_stats(pot, EffectivePlanck(1.0), g, 4, 5);
  double want = 0.0;
  for (int j = 0; j < 4; ++j) want += step_stats(5, quantum_trajectory(pot, EffectivePlanck(1.0), g, j / 4.0, 5).back()).mean_p / 4;
  CHECK(four.back().mean_p == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("engine comparison") {
  const auto r = compare_engines(CompareSpec{});
  CHECK(r.rows.front().mirror == "continuous");
  CHECK(r.rows.front().kick == 0);
  // Only the Gaussian's window-truncation leakage separates the kick-0 spectra.
  CHECK(r.rows.front().linf_vs_quantum < 1e-10);
  CHECK(r.max_linf_continuous <= 1e-2);
  REQUIRE(r.final_tv_by_levels.size() == 6);
  CHECK(r.final_tv_by_levels[3].first == 16);
  CHECK(r.final_tv_by_levels[3].second <= r.final_tv_by_levels[2].second);
  CHECK(r.rows.size() == 23 + 6 * 22);
}
