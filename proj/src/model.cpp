#include "ratchet/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ratchet/numfmt.hpp"

namespace ratchet {

void RatchetPotential::validate() const {
  if (!std::isfinite(K) || !std::isfinite(alpha) || !std::isfinite(phi))
    throw std::invalid_argument("ratchet potential fields must be finite");
  if (K < 0.0) throw std::invalid_argument("kick strength K must be non-negative");
}

EffectivePlanck::EffectivePlanck(double value) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0)
    throw std::invalid_argument("effective Planck constant must be positive and finite");
}

void MirrorProfile::validate() const {
  if (!(period_m > 0.0) || !std::isfinite(period_m))
    throw std::invalid_argument("mirror period must be positive");
  if (depth_m.size() < kMinMirrorSamples)
    throw std::invalid_argument("mirror profile needs at least 16 samples per period");
  if (n_levels && *n_levels < 2) throw std::invalid_argument("mirror level count must be >= 2");
  for (double d : depth_m)
    if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("mirror depth must be finite and >= 0");
}

double eval_potential(const RatchetPotential& pot, double x) {
  return std::sin(x) + pot.alpha * std::sin(2.0 * x + pot.phi);
}

std::vector<double> kick_phase_profile(const RatchetPotential& pot, EffectivePlanck hbar,
                                       std::span<const double> x_samples) {
  pot.validate();
  const double scale = -pot.K / hbar.value();
  std::vector<double> out(x_samples.size());
  std::transform(x_samples.begin(), x_samples.end(), out.begin(),
                 [&](double x) { return scale * eval_potential(pot, x); });
  return out;
}

std::optional<ResonanceOrder> resonance_check(EffectivePlanck hbar, std::int64_t s_max, double tol) {
  if (s_max < 1) throw std::invalid_argument("s_max must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");

  const double h = hbar.value();
  const double y = h / (4.0 * kPi);
  auto accept = [&](std::int64_t r, std::int64_t s) {
    return r >= 1 && std::abs(h - 4.0 * kPi * static_cast<double>(r) / static_cast<double>(s)) <=
                         tol * 4.0 * kPi;
  };

  // Convergents p_k/q_k of y and the intermediate fractions between them,
  // visited in non-decreasing denominator order. Every minimal-denominator
  // fraction inside a symmetric tolerance window is one of these.
  std::int64_t p_prev2 = 0, q_prev2 = 1;  // p_{-2}/q_{-2}
  std::int64_t p_prev1 = 1, q_prev1 = 0;  // p_{-1}/q_{-1}
  double x = y;
  for (int depth = 0; depth < 64; ++depth) {
    const double a_real = std::floor(x);
    const auto a = static_cast<std::int64_t>(std::min(a_real, 4.0e18));
    // At depth 0 every candidate is an integer; only floor(y) itself can be closest.
    for (std::int64_t j = (depth == 0 ? std::max<std::int64_t>(a, 1) : 1); j <= a; ++j) {
      const std::int64_t q = j * q_prev1 + q_prev2;
      if (q > s_max) return std::nullopt;
      const std::int64_t p = j * p_prev1 + p_prev2;
      if (accept(p, q)) {
        const std::int64_t g = std::gcd(p, q);
        return ResonanceOrder{p / g, q / g};
      }
    }
    const std::int64_t p_next = a * p_prev1 + p_prev2;
    const std::int64_t q_next = a * q_prev1 + q_prev2;
    p_prev2 = p_prev1;
    q_prev2 = q_prev1;
    p_prev1 = p_next;
    q_prev1 = q_next;
    const double frac = x - a_real;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

namespace {

double wrap_phase(double phase) {
  double w = std::fmod(phase, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

MirrorProfile depth_from_phase(std::span<const double> phase_samples, double lambda_m,
                               double period_m) {
  if (!(lambda_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  MirrorProfile out;
  out.period_m = period_m;
  out.depth_m.reserve(phase_samples.size());
  for (double ph : phase_samples) {
    if (!std::isfinite(ph)) throw std::invalid_argument("phase samples must be finite");
    out.depth_m.push_back(wrap_phase(ph) * lambda_m / (4.0 * kPi));
  }
  return out;
}

std::vector<double> phase_from_depth(const MirrorProfile& profile, double lambda_m) {
  if (!(lambda_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  std::vector<double> out(profile.depth_m.size());
  std::transform(profile.depth_m.begin(), profile.depth_m.end(), out.begin(),
                 [&](double d) { return 4.0 * kPi * d / lambda_m; });
  return out;
}

std::vector<double> quantize_levels(std::span<const double> depth_samples, int n_levels) {
  if (depth_samples.empty()) throw std::invalid_argument("cannot quantize an empty profile");
  if (n_levels < 2) throw std::invalid_argument("n_levels must be >= 2");
  const auto [lo_it, hi_it] = std::minmax_element(depth_samples.begin(), depth_samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(depth_samples.begin(), depth_samples.end());
  if (hi == lo) return out;

  // Endpoints are pinned exactly so a second pass sees the same ladder.
  const int top = n_levels - 1;
  std::vector<double> levels(static_cast<std::size_t>(n_levels));
  for (int k = 0; k < n_levels; ++k)
    levels[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / top;
  levels.back() = hi;

  const double step = (hi - lo) / top;
  for (double& d : out) {
    const double t = (d - lo) / step;
    auto idx = static_cast<int>(std::ceil(t - 0.5));
    idx = std::clamp(idx, 0, top);
    d = levels[static_cast<std::size_t>(idx)];
  }
  return out;
}

MirrorProfile quantize_profile(const MirrorProfile& profile, int n_levels) {
  MirrorProfile out;
  out.period_m = profile.period_m;
  out.depth_m = quantize_levels(profile.depth_m, n_levels);
  out.n_levels = n_levels;
  return out;
}

MirrorProfile ratchet_mirror(const RatchetPotential& pot, EffectivePlanck hbar, double lambda_m,
                             double period_m, std::size_t samples, std::optional<int> n_levels) {
  if (samples < kMinMirrorSamples) throw std::invalid_argument("mirror needs >= 16 samples");
  std::vector<double> x(samples);
  for (std::size_t j = 0; j < samples; ++j)
    x[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
  auto phase = kick_phase_profile(pot, hbar, x);
  const double floor_phase = *std::min_element(phase.begin(), phase.end());
  for (double& p : phase) p -= floor_phase;
  auto profile = depth_from_phase(phase, lambda_m, period_m);
  if (n_levels) profile = quantize_profile(profile, *n_levels);
  profile.validate();
  return profile;
}

void write_mirror_profile(std::ostream& os, const MirrorProfile& profile) {
  os << "# period_m=" << format_double(profile.period_m) << " n_levels="
     << (profile.n_levels ? std::to_string(*profile.n_levels) : std::string("continuous")) << '\n';
  const double dx = profile.sample_spacing();
  for (std::size_t j = 0; j < profile.depth_m.size(); ++j)
    os << format_double(dx * static_cast<double>(j)) << ',' << format_double(profile.depth_m[j])
       << '\n';
}

MirrorProfile read_mirror_profile(std::istream& is) {
  MirrorProfile out;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "period_m") {
          out.period_m = std::stod(val);
          have_header = true;
        } else if (key == "n_levels") {
          if (val == "continuous")
            out.n_levels.reset();
          else
            out.n_levels = std::stoi(val);
        }
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("mirror profile: malformed row: " + line);
    out.depth_m.push_back(std::stod(line.substr(comma + 1)));
  }
  if (!have_header) throw std::runtime_error("mirror profile: missing period_m header");
  out.validate();
  return out;
}

}  // namespace ratchet
