#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ratchet/evolution.hpp"
#include "ratchet/observables.hpp"
#include "ratchet/optics.hpp"

using namespace ratchet;

namespace {

constexpr double kLambda = 532e-9;
constexpr double kPeriod = 600e-6;

// Random field with the grating period: Fourier content only at multiples of 1/l.
BeamField periodic_field(int periods, int spp, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> cell(static_cast<std::size_t>(spp));
  for (auto& z : cell) z = {g(rng), g(rng)};
  BeamField b = uniform_beam(kPeriod, periods, spp);
  for (std::size_t j = 0; j < b.samples.size(); ++j) b.samples[j] = cell[j % cell.size()];
  return b;
}

double rms_width(const BeamField& b) {
  double p = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < b.samples.size(); ++j) {
    const double w = std::norm(b.samples[j]);
    p += w;
    m1 += w * b.x_m(j);
    m2 += w * b.x_m(j) * b.x_m(j);
  }
  m1 /= p;
  return std::sqrt(m2 / p - m1 * m1);
}

MirrorProfile ramp_mirror(int orders, std::size_t samples) {
  std::vector<double> phase(samples);
  for (std::size_t j = 0; j < samples; ++j) phase[j] = kTwoPi * orders * static_cast<double>(j) / samples;
  return depth_from_phase(phase, kLambda, kPeriod);
}

}  // namespace

TEST_CASE("default geometry gives hbar = pi / 2") {
  const OpticalGeometry g;
  CHECK(hbar_from_geometry(g).value() == doctest::Approx(0.5 * kPi).epsilon(1e-4));
  CHECK(g.order_spacing_m() == doctest::Approx(266e-6).epsilon(1e-12));
}

TEST_CASE("distance and hbar round trip") {
  for (double h : {0.1, 0.5 * kPi, 0.35 * kPi, 2 * kPi, 11.0}) {
    OpticalGeometry g;
    g.distance_m = distance_for_hbar(EffectivePlanck(h), g.lambda_m, g.period_m);
    CHECK(std::abs(hbar_from_geometry(g).value() - h) <= 1e-15 * h * 4);
    const double back = distance_for_hbar(hbar_from_geometry(g), g.lambda_m, g.period_m);
    CHECK(std::abs(back - g.distance_m) <= 1e-15 * g.distance_m * 4);
  }
}

TEST_CASE("Lau distances") {
  for (std::int64_t s = 1; s <= 8; ++s)
    for (std::int64_t r = 1; r <= 4 * s; ++r) {
      if (std::gcd(r, s) != 1) continue;
      const double via_hbar = distance_for_hbar(EffectivePlanck(4 * kPi * r / s), kLambda, kPeriod);
      CHECK(via_hbar == lau_distance(4 * r, s, kLambda, kPeriod));
      const double closed = static_cast<double>(4 * r) / s * kPeriod * kPeriod / (2 * kLambda);
      CHECK(lau_distance(4 * r, s, kLambda, kPeriod) == doctest::Approx(closed).epsilon(1e-15));
    }
  CHECK_THROWS_AS(lau_distance(0, 1, kLambda, kPeriod), std::invalid_argument);
}

TEST_CASE("calibrated flight matches the kicked-rotor free phase") {
  OpticalGeometry g;
  const double hbar = hbar_from_geometry(g).value();
  // Fresnel phase of order n: pi lambda z n^2 / l^2 must equal hbar n^2 / 2.
  const double z = calibrated_flight_m(g);
  CHECK(kPi * g.lambda_m * z / (g.period_m * g.period_m) == doctest::Approx(hbar / 2).epsilon(1e-14));
}

TEST_CASE("Talbot self-imaging") {
  const double zt = 2 * kPeriod * kPeriod / kLambda;
  const BeamField b = periodic_field(8, 64, 4);
  const BeamField t = propagate_fresnel(b, zt, kLambda);
  for (std::size_t j = 0; j < b.samples.size(); ++j) CHECK(std::abs(t.samples[j] - b.samples[j]) < 1e-10);

  // Half the Talbot length images the field shifted by half a period.
  const BeamField h = propagate_fresnel(b, zt / 2, kLambda);
  const std::size_t shift = 32;
  for (std::size_t j = 0; j < b.samples.size(); ++j)
    CHECK(std::abs(h.samples[j] - b.samples[(j + shift) % b.samples.size()]) < 1e-10);
}

TEST_CASE("Gaussian spreading follows the paraxial law") {
  const double w0 = 0.5e-3;
  const BeamField b = gaussian_beam(kPeriod, 64, 64, w0);
  CHECK(b.power() == doctest::Approx(1.0));
  CHECK(rms_width(b) == doctest::Approx(w0 / 2).epsilon(1e-9));
  const double zr = kPi * w0 * w0 / kLambda;
  for (double z : {0.5 * zr, zr, 2 * zr}) {
    const BeamField p = propagate_fresnel(b, z, kLambda);
    CHECK(p.power() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rms_width(p) == doctest::Approx(w0 / 2 * std::sqrt(1 + (z / zr) * (z / zr))).epsilon(1e-6));
  }
}

TEST_CASE("tilted plane wave lands on its diffraction order") {
  BeamField b = uniform_beam(kPeriod, 8, 64);
  for (std::size_t j = 0; j < b.samples.size(); ++j) b.samples[j] *= std::polar(1.0, kTwoPi * 3 * b.x_m(j) / kPeriod);
  const FarFieldRow row = far_field(b, 0.3, kLambda);
  CHECK(std::accumulate(row.intensity.begin(), row.intensity.end(), 0.0) == doctest::Approx(b.power()));
  CHECK(row.centroid_m() == doctest::Approx(3 * 266e-6).epsilon(1e-12));
  const auto l = row.order_ladder(1.0);
  CHECK(l.at(3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integer phase ramp shifts the ladder by whole orders") {
  for (int m : {1, -2, 3}) {
    const MirrorProfile ramp = ramp_mirror(m, 64);
    const BeamField beam = gaussian_beam(kPeriod, 32, 64, 3e-3);
    const auto before = far_field(beam, 0.3, kLambda).order_ladder(1.0);
    const auto after = far_field(apply_mirror(beam, ramp, kLambda), 0.3, kLambda).order_ladder(1.0);
    for (std::size_t i = 0; i < before.orders.size(); ++i) {
      const int n = before.orders[i];
      CHECK(std::abs(after.at(n + m) - before.prob[i]) < 1e-12);
    }
  }
}

TEST_CASE("mirror must tile the beam window") {
  BeamField b = uniform_beam(kPeriod, 8, 64);
  MirrorProfile odd = ramp_mirror(1, 64);
  odd.period_m = kPeriod * 3;
  CHECK_THROWS_AS(apply_mirror(b, odd, kLambda), std::invalid_argument);
}

TEST_CASE("phase gradients deflect the far field") {
  const double window = 48e-3;
  const std::size_t ns = 4096;
  const std::vector<double> slopes{kTwoPi * 2e3, -kTwoPi * 3e3, kTwoPi * 5e3};
  std::vector<double> phase(ns);
  double acc = 0.0;
  for (std::size_t j = 0; j < ns; ++j) {
    phase[j] = acc;
    acc += slopes[std::min<std::size_t>(j * 3 / ns, 2)] * window / ns;
  }
  const MirrorProfile m = depth_from_phase(phase, kLambda, window);
  const std::vector<DeflectionRegion> regions{{0.0, 16e-3}, {16e-3, 32e-3}, {32e-3, 48e-3}};
  const auto res = deflection_check(m, kLambda, 0.3, regions, 1.5e-3);
  REQUIRE(res.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(res[i].gradient_rad_per_m == doctest::Approx(slopes[i]).epsilon(1e-9));
    CHECK(res[i].relative_error() < 0.02);
  }
  CHECK_THROWS_AS(deflection_check(m, kLambda, 0.3, {{0.0, 5e-3}}, 1.5e-3), std::invalid_argument);
}

TEST_CASE("flat mirror gives identical rows") {
  OpticalGeometry g;
  const MirrorProfile flat = depth_from_phase(std::vector<double>(64, 0.0), kLambda, kPeriod);
  const auto img = bounce_simulation(g, flat, gaussian_beam(kPeriod, 16, 64, 2e-3), 22);
  CHECK(img.rows.size() == 22);
  for (const auto& r : img.rows)
    for (std::size_t c = 0; c < r.size(); ++c) CHECK(r[c] == doctest::Approx(img.rows[0][c]).epsilon(1e-10));
}

TEST_CASE("loss accounting keeps each row's share of the input power") {
  OpticalGeometry g;
  const MirrorProfile mirror = ratchet_mirror(RatchetPotential{}, hbar_from_geometry(g), kLambda, kPeriod, 64);
  BounceOptions opts;
  opts.loss_accounting = true;
  opts.order_span = 0;
  const auto img = bounce_simulation(g, mirror, gaussian_beam(kPeriod, 16, 64, 2e-3), 10, opts);
  CHECK(img.normalization == "loss");
  for (std::size_t k = 0; k < img.rows.size(); ++k) {
    const double p = std::accumulate(img.rows[k].begin(), img.rows[k].end(), 0.0);
    CHECK(p == doctest::Approx(std::pow(0.95, static_cast<double>(k)) * 0.05).epsilon(1e-12));
  }
}

TEST_CASE("row normalization and cropping") {
  OpticalGeometry g;
  const MirrorProfile mirror = ratchet_mirror(RatchetPotential{}, hbar_from_geometry(g), kLambda, kPeriod, 64);
  BounceOptions opts;
  opts.order_span = 5;
  const auto img = bounce_simulation(g, mirror, gaussian_beam(kPeriod, 16, 64, 2e-3), 4, opts);
  CHECK(img.rows[0].size() == static_cast<std::size_t>(11 * 16));
  CHECK(img.first_column_bin == -5 * 16 - 8);
  CHECK(img.pixel_pitch_m == doctest::Approx(kLambda * 0.3 / (16 * kPeriod)));
  for (const auto& l : img.order_ladders) CHECK(l.total() == doctest::Approx(1.0));
}

TEST_CASE("optical orders follow the quantum ladder for a wide beam") {
  const double hbar = 0.5 * kPi;
  OpticalGeometry g;
  g.distance_m = distance_for_hbar(EffectivePlanck(hbar), kLambda, kPeriod);
  const RatchetPotential pot;
  const MirrorProfile mirror = ratchet_mirror(pot, EffectivePlanck(hbar), kLambda, kPeriod, 128);
  const auto img = bounce_simulation(g, mirror, gaussian_beam(kPeriod, 128, 128, 12e-3), 8);
  int k = 0;
  evolve(plane_wave(SpatialGrid(1, 256)), KickedRunParams{pot, EffectivePlanck(hbar), 8},
         [&](int, const MomentumLadder& q) {
           CHECK(linf_distance(img.order_ladders[static_cast<std::size_t>(k)], q) < 1e-2);
           ++k;
         });
}

TEST_CASE("ccd rendering") {
  FarFieldImage img;
  img.rows = {{0.0, 1.0, 4.0}, {2.0, 2.0, 0.0}};
  const auto g = render_ccd(img, 0.5, 2);
  CHECK(g.width == 3);
  CHECK(g.height == 4);
  const std::vector<std::uint8_t> want{0, 16, 255, 0, 16, 255, 255, 255, 0, 255, 255, 0};
  CHECK(g.pixels == want);
  CHECK_THROWS_AS(render_ccd(img, 0.0), std::invalid_argument);
}

TEST_CASE("ladder image columns") {
  MomentumLadder l;
  l.orders = {-1, 0, 1, 2};
  l.prob = {0.1, 0.2, 0.3, 0.4};
  const auto img = ladder_image({l}, 1);
  CHECK(img.rows[0] == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(img.first_column_bin == -1);
}
