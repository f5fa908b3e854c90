#include "ratchet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ratchet {

std::vector<MomentumLadder> quantum_trajectory(const RatchetPotential& pot, EffectivePlanck hbar,
                                               const SpatialGrid& grid, double beta, int n_kicks) {
  std::vector<MomentumLadder> out;
  out.reserve(static_cast<std::size_t>(std::max(n_kicks, 0)));
  KickedRunParams params{pot, hbar, n_kicks};
  evolve(plane_wave(grid, 0, beta), params,
         [&](int, const MomentumLadder& l) { out.push_back(l); });
  return out;
}

OpticalGeometry geometry_for(const OpticalGeometry& base, EffectivePlanck hbar) {
  OpticalGeometry g = base;
  g.distance_m = distance_for_hbar(hbar, base.lambda_m, base.period_m);
  return g;
}

FarFieldImage optical_trajectory(const FigureSetup& setup, EffectivePlanck hbar,
                                 std::optional<int> n_levels, double beam_half_width_m,
                                 int optical_periods) {
  const OpticalGeometry geom = geometry_for(setup.geometry, hbar);
  const MirrorProfile mirror =
      ratchet_mirror(setup.potential, hbar, geom.lambda_m, geom.period_m,
                     static_cast<std::size_t>(setup.samples_per_period), n_levels);
  const BeamField beam =
      gaussian_beam(geom.period_m, optical_periods, setup.samples_per_period, beam_half_width_m);
  BounceOptions opts;
  opts.loss_accounting = setup.loss_accounting;
  opts.order_span = setup.order_span;
  return bounce_simulation(geom, mirror, beam, setup.n_kicks, opts);
}

std::vector<StepStats> ensemble_stats(const RatchetPotential& pot, EffectivePlanck hbar,
                                      const SpatialGrid& grid, int n_beta, int n_kicks) {
  if (n_beta < 1) throw std::invalid_argument("beta ensemble needs at least one member");
  std::vector<StepStats> acc(static_cast<std::size_t>(n_kicks));
  for (int k = 0; k < n_kicks; ++k) {
    acc[static_cast<std::size_t>(k)] = {k + 1, 0.0, 0.0, 0.0};
  }
  for (int j = 0; j < n_beta; ++j) {
    const double beta = static_cast<double>(j) / n_beta;
    const auto traj = quantum_trajectory(pot, hbar, grid, beta, n_kicks);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const StepStats s = step_stats(static_cast<int>(k) + 1, traj[k]);
      acc[k].mean_p += s.mean_p / n_beta;
      acc[k].mean_p2 += s.mean_p2 / n_beta;
      acc[k].participation += s.participation / n_beta;
    }
  }
  return acc;
}

namespace {

Fig2Panel fig2_panel(const FigureSetup& setup, double hbar, Engine engine) {
  Fig2Panel panel;
  panel.hbar = hbar;
  const EffectivePlanck h(hbar);
  if (engine != Engine::Optical)
    panel.quantum = quantum_trajectory(setup.potential, h, setup.grid, setup.beta, setup.n_kicks);
  if (engine != Engine::Quantum)
    panel.optical = optical_trajectory(setup, h, setup.n_levels, setup.beam_half_width_m,
                                       setup.optical_periods);
  return panel;
}

Fig3Series fig3_series(const FigureSetup& setup, double hbar) {
  Fig3Series series;
  series.hbar = hbar;
  const auto traj =
      quantum_trajectory(setup.potential, EffectivePlanck(hbar), setup.grid, setup.beta, setup.n_kicks);
  for (std::size_t k = 0; k < traj.size(); ++k)
    series.stats.push_back(step_stats(static_cast<int>(k) + 1, traj[k]));
  series.final_distribution = traj.back();
  return series;
}

}  // namespace

Fig2Result run_fig2(const FigureSetup& setup, Engine engine) {
  return {fig2_panel(setup, kResonantHbar, engine), fig2_panel(setup, kOffResonantHbar, engine)};
}

Fig3Result run_fig3(const FigureSetup& setup) {
  if (setup.n_kicks < 4) throw std::invalid_argument("fig3 needs at least 4 kicks");
  Fig3Result r;
  r.resonant = fig3_series(setup, kResonantHbar);
  r.off_resonant = fig3_series(setup, kOffResonantHbar);

  std::vector<double> k_lin, p_lin, k_all, p2_all;
  for (const auto& s : r.resonant.stats) {
    if (s.kick >= 2) {
      k_lin.push_back(s.kick);
      p_lin.push_back(s.mean_p);
    }
    k_all.push_back(s.kick);
    p2_all.push_back(s.mean_p2);
  }
  r.resonant_mean_linear = polynomial_fit(k_lin, p_lin, 1);
  r.resonant_p2_quadratic = polynomial_fit(k_all, p2_all, 2);
  r.p2_ratio = r.off_resonant.stats.back().mean_p2 / r.resonant.stats.back().mean_p2;
  return r;
}

std::string to_string(KickMode mode) {
  return mode == KickMode::FixedK ? "fixed_k" : "fixed_kick_phase";
}

void ScanSpec::validate() const {
  if (hbar_values.empty()) throw std::invalid_argument("scan has no hbar values");
  for (std::size_t i = 0; i < hbar_values.size(); ++i) {
    (void)EffectivePlanck(hbar_values[i]);
    if (i > 0 && !(hbar_values[i] > hbar_values[i - 1]))
      throw std::invalid_argument("scan hbar values must be strictly increasing");
  }
  if (kicks_at.empty()) throw std::invalid_argument("scan has no kick counts");
  for (int k : kicks_at)
    if (k < 1) throw std::invalid_argument("scan kick counts must be >= 1");
  if (modes.empty()) throw std::invalid_argument("scan has no modes");
  if (!(kick_phase_ratio >= 0.0) || !std::isfinite(kick_phase_ratio))
    throw std::invalid_argument("kick phase ratio must be finite and >= 0");
  potential.validate();
  grid.validate();
}

std::vector<double> hbar_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("scan step must be positive");
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("scan bounds must satisfy 0 < lo <= hi");
  const auto k0 = static_cast<long long>(std::llround(lo / step));
  const auto k1 = static_cast<long long>(std::llround(hi / step));
  std::vector<double> out;
  for (long long k = std::max(k0, 1LL); k <= k1; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

namespace {

struct ScanPoint {
  KickMode mode;
  double hbar;
};

std::vector<ScanPoint> scan_points(const ScanSpec& scan) {
  std::vector<KickMode> modes = scan.modes;
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  std::vector<ScanPoint> pts;
  for (KickMode m : modes)
    for (double h : scan.hbar_values) pts.push_back({m, h});
  return pts;
}

// <p> after each requested kick count, in kick_at order of the sorted list.
std::vector<double> scan_point(const ScanSpec& scan, const std::vector<int>& kicks,
                               const ScanPoint& pt) {
  RatchetPotential pot = scan.potential;
  if (pt.mode == KickMode::FixedKickPhase) pot.K = scan.kick_phase_ratio * pt.hbar;
  const int last = kicks.back();
  std::vector<double> out;
  out.reserve(kicks.size());
  std::size_t next = 0;
  KickedRunParams params{pot, EffectivePlanck(pt.hbar), last};
  evolve(plane_wave(scan.grid, 0, scan.beta), params, [&](int kick, const MomentumLadder& l) {
    while (next < kicks.size() && kicks[next] == kick) {
      out.push_back(mean_momentum(l));
      ++next;
    }
  });
  return out;
}

std::vector<int> sorted_kicks(const ScanSpec& scan) {
  std::vector<int> k = scan.kicks_at;
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

std::vector<ScanRecord> assemble(const std::vector<ScanPoint>& pts, const std::vector<int>& kicks,
                                 const std::vector<std::vector<double>>& values) {
  std::vector<ScanRecord> out;
  out.reserve(pts.size() * kicks.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < kicks.size(); ++j)
      out.push_back({pts[i].mode, pts[i].hbar, kicks[j], values[i][j]});
  return out;
}

}  // namespace

std::vector<ScanRecord> run_fig4(const ScanSpec& scan) {
  scan.validate();
  const auto pts = scan_points(scan);
  const auto kicks = sorted_kicks(scan);
  std::vector<std::vector<double>> values(pts.size());
  const auto n = static_cast<long long>(pts.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      values[static_cast<std::size_t>(i)] = scan_point(scan, kicks, pts[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(ratchet_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(pts, kicks, values);
}

std::vector<ScanRecord> run_fig4_serial(const ScanSpec& scan) {
  scan.validate();
  const auto pts = scan_points(scan);
  const auto kicks = sorted_kicks(scan);
  std::vector<std::vector<double>> values;
  values.reserve(pts.size());
  for (const auto& pt : pts) values.push_back(scan_point(scan, kicks, pt));
  return assemble(pts, kicks, values);
}

std::vector<double> scan_peaks(const std::vector<ScanRecord>& records, KickMode mode, int kicks) {
  std::vector<double> hs, mag;
  for (const auto& r : records) {
    if (r.mode == mode && r.kicks == kicks) {
      hs.push_back(r.hbar);
      mag.push_back(std::abs(r.mean_p));
    }
  }
  std::vector<double> out;
  for (std::size_t i : local_maxima(mag)) out.push_back(hs[i]);
  return out;
}

CompareResult compare_engines(const CompareSpec& spec) {
  const EffectivePlanck hbar(spec.hbar);
  FigureSetup setup;
  setup.potential = spec.potential;
  setup.grid = spec.grid;
  setup.n_kicks = spec.n_kicks;
  setup.geometry = spec.geometry;
  setup.samples_per_period = spec.samples_per_period;
  setup.order_span = 0;

  const auto quantum = quantum_trajectory(spec.potential, hbar, spec.grid, 0.0, spec.n_kicks);
  const OpticalGeometry geom = geometry_for(spec.geometry, hbar);
  const BeamField beam = gaussian_beam(geom.period_m, spec.optical_periods, spec.samples_per_period,
                                       spec.beam_half_width_m);
  const MomentumLadder input_orders =
      far_field(beam, geom.focal_m, geom.lambda_m).order_ladder(spec.hbar);
  const MomentumLadder quantum_initial = momentum_spectrum(plane_wave(spec.grid), hbar);

  CompareResult result;
  const double kick0_linf = linf_distance(input_orders, quantum_initial);
  const double kick0_tv = distribution_distance(input_orders, quantum_initial);

  const FarFieldImage wide = optical_trajectory(setup, hbar, std::nullopt, spec.beam_half_width_m,
                                                spec.optical_periods);
  result.rows.push_back({"continuous", 0, kick0_linf, kick0_tv, 0.0});
  for (int k = 1; k <= spec.n_kicks; ++k) {
    const auto& opt = wide.order_ladders[static_cast<std::size_t>(k - 1)];
    const auto& qm = quantum[static_cast<std::size_t>(k - 1)];
    result.rows.push_back({"continuous", k, linf_distance(opt, qm), distribution_distance(opt, qm), 0.0});
  }
  for (const auto& row : result.rows)
    result.max_linf_continuous = std::max(result.max_linf_continuous, row.linf_vs_quantum);

  const FarFieldImage reference = optical_trajectory(setup, hbar, std::nullopt,
                                                     spec.sweep_half_width_m, spec.sweep_periods);
  for (int levels : spec.levels) {
    const FarFieldImage img =
        optical_trajectory(setup, hbar, levels, spec.sweep_half_width_m, spec.sweep_periods);
    const std::string name = "levels_" + std::to_string(levels);
    for (int k = 1; k <= spec.n_kicks; ++k) {
      const auto& opt = img.order_ladders[static_cast<std::size_t>(k - 1)];
      const auto& qm = quantum[static_cast<std::size_t>(k - 1)];
      const auto& ref = reference.order_ladders[static_cast<std::size_t>(k - 1)];
      result.rows.push_back({name, k, linf_distance(opt, qm), distribution_distance(opt, qm),
                             distribution_distance(opt, ref)});
    }
    result.final_tv_by_levels.emplace_back(levels, result.rows.back().tv_vs_continuous);
  }
  return result;
}

void set_thread_cap(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace ratchet
