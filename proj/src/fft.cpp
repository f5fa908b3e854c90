#include "ratchet/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>

namespace ratchet {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT length must be positive");
  std::lock_guard lock(planner_mutex());
  buffer_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!buffer_) throw std::bad_alloc();
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !inverse_plan_) {
    release();
    throw std::runtime_error("FFTW planning failed");
  }
}

Fft::~Fft() {
  if (buffer_) {
    std::lock_guard lock(planner_mutex());
    release();
  }
}

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_),
      buffer_(std::exchange(other.buffer_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    if (buffer_) {
      std::lock_guard lock(planner_mutex());
      release();
    }
    n_ = other.n_;
    buffer_ = std::exchange(other.buffer_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void Fft::release() noexcept {
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  if (buffer_) fftw_free(buffer_);
  forward_plan_ = inverse_plan_ = nullptr;
  buffer_ = nullptr;
}

void Fft::forward(std::span<cplx> data) {
  if (data.size() != n_) throw std::invalid_argument("FFT length mismatch");
  std::copy(data.begin(), data.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(buffer_, buffer_ + n_, data.begin());
}

void Fft::inverse(std::span<cplx> data) {
  if (data.size() != n_) throw std::invalid_argument("FFT length mismatch");
  std::copy(data.begin(), data.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(n_);
  std::transform(buffer_, buffer_ + n_, data.begin(), [scale](cplx v) { return v * scale; });
}

}  // namespace ratchet
