#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ratchet {

using cplx = std::complex<double>;

/// Owning FFTW plan pair for one transform length.
///
/// Transforms run in place on an internal aligned buffer, so alignment (and
/// hence the codelets FFTW picks) is identical on every call; this keeps
/// repeated runs bit-reproducible. Plans are built with FFTW_ESTIMATE under a
/// process-wide lock because the FFTW planner is not thread-safe. Execution
/// is, so distinct Fft objects may be used concurrently.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const noexcept { return n_; }

  /// Unnormalized forward transform: X_k = sum_j x_j exp(-2 pi i jk/n).
  void forward(std::span<cplx> data);
  /// Normalized inverse: x_j = (1/n) sum_k X_k exp(+2 pi i jk/n).
  void inverse(std::span<cplx> data);

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  cplx* buffer_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Signed frequency index of DFT bin i for length n: i for i < n/2, i - n otherwise.
constexpr long long signed_bin(std::size_t i, std::size_t n) {
  return i < (n + 1) / 2 ? static_cast<long long>(i)
                         : static_cast<long long>(i) - static_cast<long long>(n);
}

}  // namespace ratchet
