#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srif {

// Single-channel raster stored row-major. Luminance inputs live in [0, 1];
// derived planes (Laplacian bands, normalized coefficients) may be signed.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int width, int height, double fill = 0.0);
  ImagePlane(int width, int height, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  double operator()(int x, int y) const noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& operator()(int x, int y) noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

double mean(const ImagePlane& img);

}  // namespace srif
