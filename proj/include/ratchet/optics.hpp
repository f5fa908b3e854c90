#pragma once

// Physical-units model of the optical ratchet: a paraxial field that bounces
// between the etched phase mirror and the coated flat of a cylindrical lens,
// tapped at every encounter and imaged onto the lens focal plane.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratchet/evolution.hpp"
#include "ratchet/fft.hpp"
#include "ratchet/model.hpp"

namespace ratchet {

struct OpticalGeometry {
  double lambda_m = 532e-9;
  double period_m = 600e-6;
  double distance_m = 0.169172;
  double focal_m = 0.3;
  double reflectivity = 0.95;

  /// Throws std::invalid_argument for non-positive lengths or reflectivity outside (0, 1].
  void validate() const;
  /// Focal-plane spacing between adjacent diffraction orders, lambda f / l.
  double order_spacing_m() const noexcept { return lambda_m * focal_m / period_m; }
};

/// Complex field over a periodic window of whole grating periods.
struct BeamField {
  std::vector<cplx> samples;
  double period_m = 600e-6;
  int periods = 8;
  int samples_per_period = 64;

  double window_m() const noexcept { return period_m * periods; }
  double dx_m() const noexcept { return period_m / samples_per_period; }
  double x_m(std::size_t j) const noexcept { return dx_m() * static_cast<double>(j); }
  /// sum |a|^2 dx
  double power() const;
  void validate() const;
};

inline constexpr int kMinBeamPeriods = 8;
inline constexpr int kMinSamplesPerPeriod = 64;

/// Gaussian amplitude exp(-(x - c)^2 / w^2) centred in the window, unit power.
/// `half_width_m` is the 1/e^2 intensity half-width w.
BeamField gaussian_beam(double period_m, int periods, int samples_per_period, double half_width_m);
BeamField uniform_beam(double period_m, int periods, int samples_per_period);

/// Focal-plane intensity of one tapped field, ordered by ascending spatial
/// frequency: column c is frequency (c - n/2) / window.
struct FarFieldRow {
  std::vector<double> intensity;
  double pixel_pitch_m = 0.0;
  int samples_per_order = 1;  // DFT bins between adjacent grating orders

  /// Focal-plane coordinate of column c.
  double position_m(std::size_t c) const noexcept;
  double centroid_m() const;
  /// Power per grating order: bin n gathers columns within half an order spacing of n.
  MomentumLadder order_ladder(double hbar) const;
};

struct FarFieldImage {
  std::vector<std::vector<double>> rows;  // row k = tap after kick k + 1
  std::vector<MomentumLadder> order_ladders;
  double pixel_pitch_m = 0.0;
  int samples_per_order = 1;
  int first_column_bin = 0;  // signed DFT bin of column 0
  int n_kicks = 0;
  std::string normalization = "row";

  /// Mean diffraction order of row k.
  double row_centroid_orders(std::size_t k) const;
};

struct BounceOptions {
  bool loss_accounting = false;  // rows keep reflectivity^k (1 - reflectivity) power
  int order_span = 40;           // rows keep columns within +-order_span orders
};

/// Raster of 8-bit gray values, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

EffectivePlanck hbar_from_geometry(const OpticalGeometry& geom);
double distance_for_hbar(EffectivePlanck hbar, double lambda_m, double period_m);
double lau_distance(std::int64_t a, std::int64_t b, double lambda_m, double period_m);

/// Propagation length of one mirror-to-mirror flight. The physical path is the
/// round trip 2L; it is scaled by one half so that the Fresnel phase of order n,
/// pi lambda z n^2 / l^2, equals the kicked-rotor free phase hbar n^2 / 2 with
/// hbar taken from hbar_from_geometry.
double calibrated_flight_m(const OpticalGeometry& geom);

BeamField apply_mirror(BeamField field, const MirrorProfile& mirror, double lambda_m);
BeamField propagate_fresnel(BeamField field, double distance_m, double lambda_m);
FarFieldRow far_field(const BeamField& field, double focal_m, double lambda_m);

FarFieldImage bounce_simulation(const OpticalGeometry& geom, const MirrorProfile& mirror,
                                const BeamField& input, int n_kicks, const BounceOptions& opts = {});

/// A stretch of constant phase gradient on a whole-window mirror.
struct DeflectionRegion {
  double start_m = 0.0;
  double end_m = 0.0;
};

struct DeflectionResult {
  double center_m = 0.0;
  double gradient_rad_per_m = 0.0;  // least-squares slope of the unwrapped mirror phase
  double expected_shift_m = 0.0;    // lambda f / (2 pi) * dphi/dx
  double measured_shift_m = 0.0;    // far-field centroid of a probe centred on the region
  double relative_error() const;
};

/// Probes each region of `mirror` (whose period is the whole window) with a
/// Gaussian of 1/e^2 half-width `probe_half_width_m` and compares the
/// far-field centroid shift with the local phase gradient. Each region must
/// span at least four probe diameters.
std::vector<DeflectionResult> deflection_check(const MirrorProfile& mirror, double lambda_m,
                                               double focal_m,
                                               const std::vector<DeflectionRegion>& regions,
                                               double probe_half_width_m);

/// One column per momentum order in [-order_span, order_span]; lets quantum
/// ladders go through the same rendering and CSV path as the optical engine.
FarFieldImage ladder_image(const std::vector<MomentumLadder>& ladders, int order_span);

/// Rows stacked top to bottom (kick 1 first); each row scaled to its own max
/// and mapped through value^(1/gamma) to 0..255. `row_height` repeats rows.
GrayImage render_ccd(const FarFieldImage& image, double gamma, int row_height = 1);

}  // namespace ratchet
