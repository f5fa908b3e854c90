#include "ratchet/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ratchet/config.hpp"
#include "ratchet/errors.hpp"
#include "ratchet/io.hpp"
#include "ratchet/numfmt.hpp"

namespace fs = std::filesystem;

namespace ratchet {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

Params manifest_params(const RunConfig& cfg) {
  Params p;
  std::istringstream is(to_manifest(cfg));
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# derived ", 0) == 0) line = line.substr(10);
    const auto eq = line.find('=');
    // The output location stays in run_manifest so data files do not depend on where they were written.
    if (eq != std::string::npos && line.substr(0, eq) != "out") p.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return p;
}

template <typename F>
void write_file(const fs::path& path, F&& body) {
  std::ostringstream os;
  body(os);
  write_text_file(path, os.str());
}

// Order probabilities as recorded: normalized per row, or carrying the row's
// share of the input power under loss accounting.
std::vector<MomentumLadder> recorded_ladders(const FarFieldImage& img) {
  std::vector<MomentumLadder> out = img.order_ladders;
  if (img.normalization != "loss") return out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    double power = 0.0;
    for (double v : img.rows[k]) power += v;
    for (double& p : out[k].prob) p *= power;
  }
  return out;
}

std::vector<StepStats> ladder_stats(const std::vector<MomentumLadder>& ladders) {
  std::vector<StepStats> s;
  for (std::size_t k = 0; k < ladders.size(); ++k)
    s.push_back(step_stats(static_cast<int>(k) + 1, ladders[k]));
  return s;
}

void emit_image(const fs::path& dir, const std::string& stem, const FarFieldImage& img,
                const std::vector<MomentumLadder>& ladders, const RunConfig& cfg) {
  write_pgm(dir / (stem + ".pgm"), render_ccd(img, cfg.gamma, cfg.row_height));
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) { write_orders_csv(os, ladders); });
}

void cmd_evolve(const RunConfig& cfg, const fs::path& dir) {
  const EffectivePlanck hbar(cfg.hbar);
  const std::vector<double> betas = [&] {
    if (cfg.beta_ensemble == 0) return std::vector<double>{cfg.beta};
    std::vector<double> b;
    for (int j = 0; j < cfg.beta_ensemble; ++j) b.push_back(static_cast<double>(j) / cfg.beta_ensemble);
    return b;
  }();

  std::ostringstream nd;
  std::vector<StepStats> mean(static_cast<std::size_t>(cfg.n_kicks));
  for (int k = 0; k < cfg.n_kicks; ++k) mean[static_cast<std::size_t>(k)] = {k + 1, 0.0, 0.0, 0.0};
  const double w = 1.0 / static_cast<double>(betas.size());
  for (double beta : betas) {
    const auto traj = quantum_trajectory(cfg.potential(), hbar, cfg.grid(), beta, cfg.n_kicks);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      write_spectrum_ndjson(nd, static_cast<int>(k) + 1, traj[k]);
      const StepStats s = step_stats(static_cast<int>(k) + 1, traj[k]);
      mean[k].mean_p += w * s.mean_p;
      mean[k].mean_p2 += w * s.mean_p2;
      mean[k].participation += w * s.participation;
    }
  }
  write_text_file(dir / "spectra.ndjson", nd.str());
  write_file(dir / "stats.csv",
             [&](std::ostream& os) { write_stats_csv(os, mean, manifest_params(cfg)); });
}

void cmd_optical(const RunConfig& cfg, const fs::path& dir) {
  const FigureSetup setup = cfg.figure_setup();
  const FarFieldImage img = optical_trajectory(setup, EffectivePlanck(cfg.hbar), cfg.n_levels,
                                               cfg.beam_width_m, cfg.optical_periods);
  const auto ladders = recorded_ladders(img);
  emit_image(dir, "optical", img, ladders, cfg);
  write_file(dir / "optical_stats.csv", [&](std::ostream& os) {
    write_stats_csv(os, ladder_stats(img.order_ladders), manifest_params(cfg));
  });
}

void cmd_mirror(const RunConfig& cfg, const fs::path& dir) {
  const MirrorProfile m =
      ratchet_mirror(cfg.potential(), EffectivePlanck(cfg.hbar), cfg.lambda_m, cfg.period_m,
                     static_cast<std::size_t>(cfg.samples_per_period), cfg.n_levels);
  write_file(dir / "mirror_profile.csv", [&](std::ostream& os) { write_mirror_profile(os, m); });
}

void cmd_scan(const RunConfig& cfg, const fs::path& dir) {
  const ScanSpec spec = cfg.scan_spec();
  const auto records = run_fig4(spec);
  write_file(dir / "fig4_scan.csv", [&](std::ostream& os) { write_scan_csv(os, records); });
  write_file(dir / "fig4_peaks.csv", [&](std::ostream& os) {
    os << "mode,kicks,hbar\n";
    for (KickMode m : spec.modes)
      for (int k : spec.kicks_at)
        for (double h : scan_peaks(records, m, k))
          os << to_string(m) << ',' << k << ',' << format_double(h) << '\n';
  });
}

void cmd_compare(const RunConfig& cfg, const fs::path& dir) {
  const CompareResult r = compare_engines(cfg.compare_spec());
  write_file(dir / "compare_engines.csv", [&](std::ostream& os) { write_compare_csv(os, r); });
}

void cmd_figs(const RunConfig& cfg, const fs::path& dir) {
  const FigureSetup setup = cfg.figure_setup();
  const Fig2Result fig2 = run_fig2(setup, cfg.engine);
  for (const auto& [panel, stem] : {std::pair{&fig2.resonant, "fig2_a"}, {&fig2.off_resonant, "fig2_b"}}) {
    const std::string s = stem;
    if (panel->optical) emit_image(dir, s, *panel->optical, recorded_ladders(*panel->optical), cfg);
    if (!panel->quantum.empty()) {
      const std::string q = panel->optical ? s + "_quantum" : s;
      emit_image(dir, q, ladder_image(panel->quantum, cfg.order_span), panel->quantum, cfg);
    }
  }

  const Fig3Result fig3 = run_fig3(setup);
  for (const auto& [series, name] :
       {std::pair{&fig3.resonant, "res"}, std::pair{&fig3.off_resonant, "offres"}}) {
    Params p = manifest_params(cfg);
    p.emplace_back("series_hbar", format_double(series->hbar));
    write_file(dir / ("fig3_stats_" + std::string(name) + ".csv"),
               [&](std::ostream& os) { write_stats_csv(os, series->stats, p); });
    write_file(dir / ("fig3_final_" + std::string(name) + ".csv"),
               [&](std::ostream& os) { write_orders_csv(os, {series->final_distribution}); });
  }
  write_file(dir / "fig3_fits.csv", [&](std::ostream& os) { write_fits_csv(os, fig3); });

  cmd_scan(cfg, dir);
  cmd_compare(cfg, dir);
}

int thread_cap_from_env() {
  const char* env = std::getenv("RATCHET_LAB_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0 || v > 4096)
    throw ConfigError("RATCHET_LAB_THREADS", "expected a non-negative integer");
  return static_cast<int>(v);
}

Overrides parse_extras(const std::vector<std::string>& extras) {
  Overrides o;
  for (const auto& a : extras) {
    if (a.rfind("--", 0) != 0 || a.find('=') == std::string::npos)
      throw ConfigError("", "unrecognized argument '" + a + "' (expected --key=value)");
    const auto eq = a.find('=');
    o.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
  }
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum ratchet simulator: kicked-rotor and optical bounce engines", "ratchet-lab"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  bool fixed_kick_phase = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"evolve", "quantum kicked-rotor run; per-kick spectra as NDJSON"},
      {"optical", "optical bounce simulation; pseudo-CCD image and order CSV"},
      {"scan", "mean momentum versus hbar"},
      {"mirror", "ratchet mirror depth profile"},
      {"compare", "quantum versus optical distances, with the mirror quantization sweep"},
      {"figs", "all figure artifacts end to end"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--fixed-kick-phase", fixed_kick_phase, "scan at constant K/hbar");
    sub->allow_extras();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ratchet-lab: " << e.what() << '\n';
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ConfigError("config", "cannot read '" + config_path + "'");
      std::ostringstream ss;
      ss << is.rdbuf();
      text = ss.str();
    }
    Overrides overrides = parse_extras(sub->remaining());
    if (!out_dir.empty()) overrides.emplace_back("out", out_dir);
    if (fixed_kick_phase) overrides.emplace_back("scan_modes", "fixed_kick_phase");
    const RunConfig cfg = parse_config(text, overrides);
    set_thread_cap(thread_cap_from_env());

    const fs::path dir = cfg.out;
    fs::create_directories(dir);
    const std::string name = sub->get_name();
    if (name == "evolve") cmd_evolve(cfg, dir);
    else if (name == "optical") cmd_optical(cfg, dir);
    else if (name == "scan") cmd_scan(cfg, dir);
    else if (name == "mirror") cmd_mirror(cfg, dir);
    else if (name == "compare") cmd_compare(cfg, dir);
    else cmd_figs(cfg, dir);
    write_text_file(dir / "run_manifest", to_manifest(cfg));
  } catch (const ConfigError& e) {
    err << "ratchet-lab: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "ratchet-lab: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "ratchet-lab: invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "ratchet-lab: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOk;
}

}  // namespace ratchet
