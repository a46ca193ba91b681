#include "srif/filter.hpp"

#include <cmath>

#include "srif/errors.hpp"

namespace srif {

int reflect_index(int i, int n) noexcept {
  if (n == 1) return 0;
  // Fold repeatedly; each pass shrinks |i|'s excursion, period is 2n - 2.
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

std::vector<double> gaussian_window(int length, double sigma) {
  if (length < 1 || length % 2 == 0) {
    throw DimensionTooSmall("gaussian window length must be odd and positive");
  }
  std::vector<double> taps(length);
  const int half = length / 2;
  double sum = 0.0;
  for (int i = 0; i < length; ++i) {
    const double d = i - half;
    taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

ImagePlane separable_filter(const ImagePlane& img, std::span<const double> kx,
                            std::span<const double> ky) {
  const int w = img.width();
  const int h = img.height();
  const int rx = static_cast<int>(kx.size()) / 2;
  const int ry = static_cast<int>(ky.size()) / 2;

  ImagePlane tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < static_cast<int>(kx.size()); ++k) {
        acc += kx[k] * img(reflect_index(x + k - rx, w), y);
      }
      tmp(x, y) = acc;
    }
  }
  ImagePlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < static_cast<int>(ky.size()); ++k) {
        acc += ky[k] * tmp(x, reflect_index(y + k - ry, h));
      }
      out(x, y) = acc;
    }
  }
  return out;
}

ImagePlane valid_window_sums(const ImagePlane& img, std::span<const double> kx,
                             std::span<const double> ky) {
  const int w = img.width();
  const int h = img.height();
  const int nx = static_cast<int>(kx.size());
  const int ny = static_cast<int>(ky.size());
  if (w < nx || h < ny) {
    throw DimensionTooSmall("image smaller than analysis window");
  }
  const int ow = w - nx + 1;
  const int oh = h - ny + 1;

  ImagePlane rows(ow, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < nx; ++k) acc += kx[k] * img(x + k, y);
      rows(x, y) = acc;
    }
  }
  ImagePlane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < ny; ++k) acc += ky[k] * rows(x, y + k);
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace srif
