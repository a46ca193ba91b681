#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "srif/errors.hpp"

namespace srif::detail {

namespace {

// The FFTW planner mutates global state; executions are thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void FftwDeleter::operator()(std::complex<double>* p) const noexcept {
  fftw_free(reinterpret_cast<void*>(p));
}

FftBuffer alloc_complex(std::size_t n) {
  auto* p = static_cast<std::complex<double>*>(
      fftw_malloc(n * sizeof(std::complex<double>)));
  if (p == nullptr) throw std::bad_alloc();
  return FftBuffer(p);
}

Fft2D::Fft2D(int width, int height) : w_(width), h_(height) {
  FftBuffer scratch = alloc_complex(static_cast<std::size_t>(w_) * h_);
  auto* c = reinterpret_cast<fftw_complex*>(scratch.get());
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps planning deterministic and leaves the array intact.
  fwd_ = fftw_plan_dft_2d(h_, w_, c, c, FFTW_FORWARD, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_2d(h_, w_, c, c, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (fwd_ == nullptr || inv_ == nullptr) {
    throw Error("InternalError", "fftw plan creation failed", 6);
  }
}

Fft2D::~Fft2D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (inv_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Fft2D::forward(std::complex<double>* data) const {
  auto* c = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), c, c);
}

void Fft2D::inverse(std::complex<double>* data) const {
  auto* c = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(inv_), c, c);
  const double norm = 1.0 / (static_cast<double>(w_) * h_);
  const std::size_t n = static_cast<std::size_t>(w_) * h_;
  for (std::size_t i = 0; i < n; ++i) data[i] *= norm;
}

}  // namespace srif::detail
