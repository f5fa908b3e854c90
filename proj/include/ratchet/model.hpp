#pragma once

// Domain types for the flashing ratchet: the kick potential, the effective
// Planck constant, resonance arithmetic, and the etched phase-mirror profile.

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ratchet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// v(x) = sin x + alpha * sin(2x + phi), scaled by the kick strength K.
struct RatchetPotential {
  double K = 1.0;
  double alpha = 0.3;
  double phi = 0.0;

  /// Throws std::invalid_argument when K < 0 or any field is not finite.
  void validate() const;
};

/// Dimensionless effective Planck constant. Always positive and finite.
class EffectivePlanck {
 public:
  explicit EffectivePlanck(double value);

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Resonance order r/s of hbar = 4 pi r / s, with gcd(r, s) = 1.
struct ResonanceOrder {
  std::int64_t r = 1;
  std::int64_t s = 1;

  friend bool operator==(const ResonanceOrder&, const ResonanceOrder&) = default;
};

/// One spatial period of an etched mirror surface, uniformly sampled.
/// Depths live in [0, lambda/2). `n_levels` is empty for a continuous profile.
struct MirrorProfile {
  double period_m = 0.0;
  std::vector<double> depth_m;
  std::optional<int> n_levels;

  std::size_t size() const noexcept { return depth_m.size(); }
  double sample_spacing() const { return period_m / static_cast<double>(depth_m.size()); }
  void validate() const;
};

inline constexpr std::size_t kMinMirrorSamples = 16;

double eval_potential(const RatchetPotential& pot, double x);

/// Phase Phi(x) = -K v(x) / hbar imprinted by one kick; the kick factor is exp(i Phi).
std::vector<double> kick_phase_profile(const RatchetPotential& pot, EffectivePlanck hbar,
                                       std::span<const double> x_samples);

/// Smallest-s coprime (r, s) with s <= s_max and |hbar - 4 pi r/s| <= tol * 4 pi.
std::optional<ResonanceOrder> resonance_check(EffectivePlanck hbar, std::int64_t s_max, double tol);

/// Double-pass reflection: d = phase * lambda / (4 pi), wrapped into [0, lambda/2).
MirrorProfile depth_from_phase(std::span<const double> phase_samples, double lambda_m,
                               double period_m);

/// phi = 4 pi d / lambda.
std::vector<double> phase_from_depth(const MirrorProfile& profile, double lambda_m);

/// Uniform levels spanning [min, max]; nearest level, ties toward the lower one.
std::vector<double> quantize_levels(std::span<const double> depth_samples, int n_levels);
MirrorProfile quantize_profile(const MirrorProfile& profile, int n_levels);

/// Mirror that imprints the kick phase of `pot` at `hbar`, sampled with
/// `samples` points per period. The phase is shifted so its minimum is zero
/// (a global piston) before conversion to depth.
MirrorProfile ratchet_mirror(const RatchetPotential& pot, EffectivePlanck hbar, double lambda_m,
                             double period_m, std::size_t samples,
                             std::optional<int> n_levels = std::nullopt);

/// Two-column text: a `# period_m=<v> n_levels=<v>` header, then `x_meters,depth_meters`.
void write_mirror_profile(std::ostream& os, const MirrorProfile& profile);
MirrorProfile read_mirror_profile(std::istream& is);

}  // namespace ratchet
