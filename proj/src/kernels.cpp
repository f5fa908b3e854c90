#include "ratchet/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ratchet::kernels {

namespace {

inline cplx unit(double phase) { return {std::cos(phase), std::sin(phase)}; }

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

void multiply(std::span<cplx> data, std::span<const cplx> factor) {
  require_same(data.size(), factor.size());
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static) if (data.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) data[i] *= factor[i];
}

void unimodular(std::span<const double> phase, std::span<cplx> out) {
  require_same(phase.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = unit(phase[i]);
}

void quadratic_phase(std::span<const double> q, double scale, std::span<cplx> out) {
  require_same(q.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = unit(-scale * q[i] * q[i]);
}

void abs2(std::span<const cplx> data, std::span<double> out) {
  require_same(data.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::norm(data[i]);
}

namespace serial {

void multiply(std::span<cplx> data, std::span<const cplx> factor) {
  require_same(data.size(), factor.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factor[i];
}

void unimodular(std::span<const double> phase, std::span<cplx> out) {
  require_same(phase.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = unit(phase[i]);
}

void quadratic_phase(std::span<const double> q, double scale, std::span<cplx> out) {
  require_same(q.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = unit(-scale * q[i] * q[i]);
}

void abs2(std::span<const cplx> data, std::span<double> out) {
  require_same(data.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(data[i]);
}

}  // namespace serial

double sum_abs2(std::span<const cplx> data) {
  double s = 0.0;
  for (const auto& v : data) s += std::norm(v);
  return s;
}

}  // namespace ratchet::kernels
