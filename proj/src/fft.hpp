#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace srif::detail {

struct FftwDeleter {
  void operator()(std::complex<double>* p) const noexcept;
};
using FftBuffer = std::unique_ptr<std::complex<double>[], FftwDeleter>;

// FFTW-aligned allocation; buffers from here may be used with any plan of
// the matching size.
FftBuffer alloc_complex(std::size_t n);

// In-place 2D transforms for one fixed size. Plan creation is serialized
// internally; execution on distinct buffers is safe from multiple threads.
class Fft2D {
 public:
  Fft2D(int width, int height);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int width() const noexcept { return w_; }
  int height() const noexcept { return h_; }

  void forward(std::complex<double>* data) const;
  // Normalized by 1 / (width * height).
  void inverse(std::complex<double>* data) const;

 private:
  int w_;
  int h_;
  void* fwd_;
  void* inv_;
};

}  // namespace srif::detail
