#pragma once

// Pointwise kernels shared by the quantum and optical engines. The default
// versions are OpenMP-parallel above a size threshold; `serial::` holds the
// plain loops they are tested against. Every element is computed by the same
// expression in both, so results are bit-identical regardless of thread count.
// Reductions stay serial to keep summation order fixed.

#include <complex>
#include <cstddef>
#include <span>

namespace ratchet::kernels {

using cplx = std::complex<double>;

/// Below this length the parallel kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

/// data[i] *= factor[i]
void multiply(std::span<cplx> data, std::span<const cplx> factor);
/// out[i] = exp(i * phase[i])
void unimodular(std::span<const double> phase, std::span<cplx> out);
/// out[i] = exp(-i * scale * q[i]^2), the free-flight diagonal
void quadratic_phase(std::span<const double> q, double scale, std::span<cplx> out);
/// out[i] = |data[i]|^2
void abs2(std::span<const cplx> data, std::span<double> out);

namespace serial {
void multiply(std::span<cplx> data, std::span<const cplx> factor);
void unimodular(std::span<const double> phase, std::span<cplx> out);
void quadratic_phase(std::span<const double> q, double scale, std::span<cplx> out);
void abs2(std::span<const cplx> data, std::span<double> out);
}  // namespace serial

/// Sum of |data[i]|^2 in index order.
double sum_abs2(std::span<const cplx> data);

}  // namespace ratchet::kernels
