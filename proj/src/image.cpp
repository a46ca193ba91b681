#include "srif/image.hpp"

#include "srif/errors.hpp"

namespace srif {

ImagePlane::ImagePlane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw DimensionTooSmall("image dimensions must be positive");
  }
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

ImagePlane::ImagePlane(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) {
    throw DimensionTooSmall("image dimensions must be positive");
  }
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionMismatch("sample count does not match dimensions");
  }
}

double mean(const ImagePlane& img) {
  if (img.empty()) return 0.0;
  double sum = 0.0;
  for (double v : img.samples()) sum += v;
  return sum / static_cast<double>(img.size());
}

}  // namespace srif
