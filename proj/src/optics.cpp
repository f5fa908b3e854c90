#include "ratchet/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratchet/kernels.hpp"

namespace ratchet {

void OpticalGeometry::validate() const {
  for (double v : {lambda_m, period_m, distance_m, focal_m})
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("optical lengths must be positive");
  if (!(reflectivity > 0.0 && reflectivity <= 1.0))
    throw std::invalid_argument("reflectivity must lie in (0, 1]");
}

double BeamField::power() const { return kernels::sum_abs2(samples) * dx_m(); }

void BeamField::validate() const {
  if (!(period_m > 0.0)) throw std::invalid_argument("beam period must be positive");
  if (periods < kMinBeamPeriods) throw std::invalid_argument("beam window must span >= 8 periods");
  if (samples_per_period < kMinSamplesPerPeriod)
    throw std::invalid_argument("beam needs >= 64 samples per period");
  if (samples.size() != static_cast<std::size_t>(periods) * static_cast<std::size_t>(samples_per_period))
    throw std::invalid_argument("beam sample count does not match its window");
}

namespace {

BeamField empty_beam(double period_m, int periods, int samples_per_period) {
  BeamField b;
  b.period_m = period_m;
  b.periods = periods;
  b.samples_per_period = samples_per_period;
  b.samples.assign(static_cast<std::size_t>(periods) * static_cast<std::size_t>(samples_per_period),
                   cplx{});
  b.validate();
  return b;
}

void set_unit_power(BeamField& b) {
  const double p = b.power();
  if (!(p > 0.0)) throw std::invalid_argument("beam has zero power");
  const double s = 1.0 / std::sqrt(p);
  for (auto& a : b.samples) a *= s;
}

}  // namespace

BeamField gaussian_beam(double period_m, int periods, int samples_per_period, double half_width_m) {
  if (!(half_width_m > 0.0)) throw std::invalid_argument("beam half-width must be positive");
  auto b = empty_beam(period_m, periods, samples_per_period);
  const double center = 0.5 * b.window_m();
  for (std::size_t j = 0; j < b.samples.size(); ++j) {
    const double u = (b.x_m(j) - center) / half_width_m;
    b.samples[j] = std::exp(-u * u);
  }
  set_unit_power(b);
  return b;
}

BeamField uniform_beam(double period_m, int periods, int samples_per_period) {
  auto b = empty_beam(period_m, periods, samples_per_period);
  std::fill(b.samples.begin(), b.samples.end(), cplx{1.0, 0.0});
  set_unit_power(b);
  return b;
}

EffectivePlanck hbar_from_geometry(const OpticalGeometry& geom) {
  geom.validate();
  return EffectivePlanck(kTwoPi * geom.lambda_m * geom.distance_m / (geom.period_m * geom.period_m));
}

double distance_for_hbar(EffectivePlanck hbar, double lambda_m, double period_m) {
  if (!(lambda_m > 0.0) || !(period_m > 0.0)) throw std::invalid_argument("lengths must be positive");
  return hbar.value() * period_m * period_m / (kTwoPi * lambda_m);
}

double lau_distance(std::int64_t a, std::int64_t b, double lambda_m, double period_m) {
  if (a < 1 || b < 1) throw std::invalid_argument("Lau integers must be >= 1");
  // (a/b) l^2 / (2 lambda), routed through the hbar map so that Lau distances and
  // resonant hbar = 4 pi r/s give bit-identical lengths.
  return distance_for_hbar(EffectivePlanck(kPi * static_cast<double>(a) / static_cast<double>(b)),
                           lambda_m, period_m);
}

double calibrated_flight_m(const OpticalGeometry& geom) {
  const double round_trip = 2.0 * geom.distance_m;
  return 0.5 * round_trip;
}

BeamField apply_mirror(BeamField field, const MirrorProfile& mirror, double lambda_m) {
  field.validate();
  mirror.validate();
  const double ratio = field.window_m() / mirror.period_m;
  const double reps = std::round(ratio);
  if (reps < 1.0 || std::abs(ratio - reps) > 1e-9 * ratio)
    throw std::invalid_argument("beam window is not a whole number of mirror periods");

  const auto mirror_phase = phase_from_depth(mirror, lambda_m);
  std::vector<cplx> mirror_factor(mirror_phase.size());
  kernels::unimodular(mirror_phase, mirror_factor);

  // Nearest mirror sample for field sample j: round(j * Ns * reps / N), exact in integers.
  const auto n = static_cast<long long>(field.samples.size());
  const auto ns = static_cast<long long>(mirror.size());
  const auto r = static_cast<long long>(reps);
  std::vector<cplx> factor(field.samples.size());
  for (long long j = 0; j < n; ++j) {
    const long long idx = ((2 * j * ns * r + n) / (2 * n)) % ns;
    factor[static_cast<std::size_t>(j)] = mirror_factor[static_cast<std::size_t>(idx)];
  }
  kernels::multiply(field.samples, factor);
  return field;
}

BeamField propagate_fresnel(BeamField field, double distance_m, double lambda_m) {
  if (!(distance_m >= 0.0)) throw std::invalid_argument("propagation distance must be >= 0");
  if (!(lambda_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  field.validate();
  if (distance_m == 0.0) return field;
  const std::size_t n = field.samples.size();
  const double window = field.window_m();
  std::vector<double> freq(n);
  for (std::size_t i = 0; i < n; ++i) freq[i] = static_cast<double>(signed_bin(i, n)) / window;
  std::vector<cplx> factor(n);
  kernels::quadratic_phase(freq, kPi * lambda_m * distance_m, factor);
  Fft fft(n);
  fft.forward(field.samples);
  kernels::multiply(field.samples, factor);
  fft.inverse(field.samples);
  return field;
}

FarFieldRow far_field(const BeamField& field, double focal_m, double lambda_m) {
  if (!(focal_m > 0.0)) throw std::invalid_argument("focal length must be positive");
  field.validate();
  const std::size_t n = field.samples.size();
  std::vector<cplx> spec = field.samples;
  Fft fft(n);
  fft.forward(spec);
  std::vector<double> raw(n);
  kernels::abs2(spec, raw);

  FarFieldRow row;
  row.pixel_pitch_m = lambda_m * focal_m / field.window_m();
  row.samples_per_order = field.periods;
  row.intensity.resize(n);
  // Parseval: sum |X_k|^2 dx / n equals the field power.
  const double scale = field.dx_m() / static_cast<double>(n);
  const std::size_t half = n / 2;
  for (std::size_t c = 0; c < n; ++c) row.intensity[c] = raw[(c + n - half) % n] * scale;
  return row;
}

double FarFieldRow::position_m(std::size_t c) const noexcept {
  return (static_cast<double>(c) - static_cast<double>(intensity.size() / 2)) * pixel_pitch_m;
}

double FarFieldRow::centroid_m() const {
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < intensity.size(); ++c) {
    num += position_m(c) * intensity[c];
    den += intensity[c];
  }
  return den > 0.0 ? num / den : 0.0;
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

MomentumLadder bin_orders(std::span<const double> intensity, long long first_bin, int per_order,
                          double hbar) {
  const long long m = per_order;
  const long long last_bin = first_bin + static_cast<long long>(intensity.size()) - 1;
  const long long lo = floor_div(first_bin + m / 2, m);
  const long long hi = floor_div(last_bin + m / 2, m);
  MomentumLadder out;
  out.hbar = hbar;
  out.periods = 1;
  out.beta = 0.0;
  out.orders.resize(static_cast<std::size_t>(hi - lo + 1));
  out.prob.assign(out.orders.size(), 0.0);
  for (long long o = lo; o <= hi; ++o) out.orders[static_cast<std::size_t>(o - lo)] = static_cast<int>(o);
  double total = 0.0;
  for (std::size_t c = 0; c < intensity.size(); ++c) {
    const long long bin = first_bin + static_cast<long long>(c);
    out.prob[static_cast<std::size_t>(floor_div(bin + m / 2, m) - lo)] += intensity[c];
    total += intensity[c];
  }
  if (total > 0.0)
    for (double& p : out.prob) p /= total;
  return out;
}

}  // namespace

MomentumLadder FarFieldRow::order_ladder(double hbar) const {
  const auto first = -static_cast<long long>(intensity.size() / 2);
  return bin_orders(intensity, first, samples_per_order, hbar);
}

double FarFieldImage::row_centroid_orders(std::size_t k) const {
  const auto& l = order_ladders.at(k);
  double s = 0.0;
  for (std::size_t i = 0; i < l.orders.size(); ++i) s += l.orders[i] * l.prob[i];
  return s;
}

FarFieldImage bounce_simulation(const OpticalGeometry& geom, const MirrorProfile& mirror,
                                const BeamField& input, int n_kicks, const BounceOptions& opts) {
  if (n_kicks < 1) throw std::invalid_argument("n_kicks must be >= 1");
  geom.validate();
  input.validate();
  if (std::abs(input.period_m - geom.period_m) > 1e-12 * geom.period_m)
    throw std::invalid_argument("beam period differs from the mirror period in the geometry");

  const double hbar = hbar_from_geometry(geom).value();
  const double flight = calibrated_flight_m(geom);
  const double input_power = input.power();
  const double transmit = 1.0 - geom.reflectivity;

  FarFieldImage image;
  image.n_kicks = n_kicks;
  image.samples_per_order = input.periods;
  image.normalization = opts.loss_accounting ? "loss" : "row";

  const auto n = static_cast<long long>(input.samples.size());
  const long long m = input.periods;
  long long first = -n / 2;
  long long last = n - 1 - n / 2;
  if (opts.order_span > 0) {
    first = std::max(first, -static_cast<long long>(opts.order_span) * m - m / 2);
    last = std::min(last, static_cast<long long>(opts.order_span) * m + (m - 1) / 2);
  }
  image.first_column_bin = static_cast<int>(first);

  BeamField field = input;
  double surviving = 1.0;  // reflectivity^(k-1)
  for (int k = 1; k <= n_kicks; ++k) {
    field = apply_mirror(std::move(field), mirror, geom.lambda_m);
    FarFieldRow row = far_field(field, geom.focal_m, geom.lambda_m);
    image.pixel_pitch_m = row.pixel_pitch_m;
    image.order_ladders.push_back(row.order_ladder(hbar));

    double row_total = 0.0;
    for (double v : row.intensity) row_total += v;
    const double scale = opts.loss_accounting
                             ? surviving * transmit * input_power / row_total
                             : (row_total > 0.0 ? 1.0 / row_total : 0.0);
    const auto begin = row.intensity.begin() + (first + n / 2);
    const auto end = row.intensity.begin() + (last + n / 2 + 1);
    std::vector<double> kept(begin, end);
    for (double& v : kept) v *= scale;
    image.rows.push_back(std::move(kept));

    surviving *= geom.reflectivity;
    if (k < n_kicks) field = propagate_fresnel(std::move(field), flight, geom.lambda_m);
  }
  return image;
}

double DeflectionResult::relative_error() const {
  if (expected_shift_m == 0.0) return measured_shift_m == 0.0 ? 0.0 : INFINITY;
  return std::abs(measured_shift_m - expected_shift_m) / std::abs(expected_shift_m);
}

std::vector<DeflectionResult> deflection_check(const MirrorProfile& mirror, double lambda_m,
                                               double focal_m,
                                               const std::vector<DeflectionRegion>& regions,
                                               double probe_half_width_m) {
  mirror.validate();
  if (!(probe_half_width_m > 0.0)) throw std::invalid_argument("probe half-width must be positive");
  const auto ns = static_cast<int>(mirror.size());
  if (ns % kMinBeamPeriods != 0 || ns / kMinBeamPeriods < kMinSamplesPerPeriod)
    throw std::invalid_argument("deflection mirror needs a multiple of 8 samples, >= 512");

  const double window = mirror.period_m;
  const double dx = mirror.sample_spacing();
  const auto phase = phase_from_depth(mirror, lambda_m);

  std::vector<DeflectionResult> out;
  for (const auto& region : regions) {
    if (!(region.end_m > region.start_m) || region.start_m < 0.0 || region.end_m > window)
      throw std::invalid_argument("deflection region outside the mirror");
    if (region.end_m - region.start_m < 4.0 * (2.0 * probe_half_width_m))
      throw std::invalid_argument("deflection region too small for the probe");

    // Least-squares slope of the unwrapped phase across the region.
    const auto j0 = static_cast<std::size_t>(std::ceil(region.start_m / dx));
    const auto j1 = std::min(static_cast<std::size_t>(std::floor(region.end_m / dx)), mirror.size() - 1);
    std::vector<double> xs, ys;
    double offset = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) {
      if (j > j0) {
        const double jump = phase[j] - phase[j - 1];
        if (jump > kPi) offset -= kTwoPi;
        if (jump < -kPi) offset += kTwoPi;
      }
      xs.push_back(dx * static_cast<double>(j));
      ys.push_back(phase[j] + offset);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }

    DeflectionResult res;
    res.center_m = 0.5 * (region.start_m + region.end_m);
    res.gradient_rad_per_m = sxx > 0.0 ? sxy / sxx : 0.0;
    res.expected_shift_m = lambda_m * focal_m / kTwoPi * res.gradient_rad_per_m;

    BeamField probe;
    probe.period_m = window / kMinBeamPeriods;
    probe.periods = kMinBeamPeriods;
    probe.samples_per_period = ns / kMinBeamPeriods;
    probe.samples.resize(mirror.size());
    for (std::size_t j = 0; j < probe.samples.size(); ++j) {
      const double u = (probe.x_m(j) - res.center_m) / probe_half_width_m;
      probe.samples[j] = std::exp(-u * u);
    }
    probe = apply_mirror(std::move(probe), mirror, lambda_m);
    res.measured_shift_m = far_field(probe, focal_m, lambda_m).centroid_m();
    out.push_back(res);
  }
  return out;
}

FarFieldImage ladder_image(const std::vector<MomentumLadder>& ladders, int order_span) {
  if (order_span < 0) throw std::invalid_argument("order span must be >= 0");
  FarFieldImage image;
  image.n_kicks = static_cast<int>(ladders.size());
  image.samples_per_order = 1;
  image.first_column_bin = -order_span;
  image.normalization = "row";
  for (const auto& l : ladders) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(2 * order_span + 1));
    for (int o = -order_span; o <= order_span; ++o) row.push_back(l.at(o));
    image.rows.push_back(std::move(row));
    image.order_ladders.push_back(l);
  }
  return image;
}

GrayImage render_ccd(const FarFieldImage& image, double gamma, int row_height) {
  if (image.rows.empty()) throw std::invalid_argument("image has no rows");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (row_height < 1) throw std::invalid_argument("row height must be >= 1");
  GrayImage g;
  g.width = static_cast<int>(image.rows.front().size());
  g.height = static_cast<int>(image.rows.size()) * row_height;
  g.pixels.reserve(static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height));
  for (const auto& row : image.rows) {
    if (static_cast<int>(row.size()) != g.width) throw std::invalid_argument("ragged image rows");
    const double peak = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
    std::vector<std::uint8_t> line(row.size(), 0);
    if (peak > 0.0)
      for (std::size_t c = 0; c < row.size(); ++c) {
        const double v = std::pow(std::max(row[c], 0.0) / peak, 1.0 / gamma);
        line[c] = static_cast<std::uint8_t>(std::lround(255.0 * std::min(v, 1.0)));
      }
    for (int r = 0; r < row_height; ++r) g.pixels.insert(g.pixels.end(), line.begin(), line.end());
  }
  return g;
}

}  // namespace ratchet
