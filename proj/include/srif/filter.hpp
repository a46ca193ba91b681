#pragma once

#include <span>
#include <vector>

#include "srif/image.hpp"

namespace srif {

// Fold an out-of-range index back into [0, n) by mirroring about the first
// and last sample without repeating the edge: n = 4 maps -1 -> 1, 4 -> 2.
int reflect_index(int i, int n) noexcept;

// Discrete Gaussian taps, normalized to unit sum. length must be odd.
std::vector<double> gaussian_window(int length, double sigma);

// Same-size separable correlation; borders are mirror-extended.
ImagePlane separable_filter(const ImagePlane& img, std::span<const double> kx,
                            std::span<const double> ky);

// Windowed sums over every fully interior window position. The result is
// (w - kx + 1) x (h - ky + 1); no border handling is involved.
ImagePlane valid_window_sums(const ImagePlane& img, std::span<const double> kx,
                             std::span<const double> ky);

}  // namespace srif
