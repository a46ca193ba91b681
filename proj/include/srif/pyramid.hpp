#pragma once

#include <vector>

#include "srif/image.hpp"

namespace srif {

// levels[0] is the finest. A depth-d decomposition yields d Gaussian levels
// and d - 1 Laplacian bands; band l pairs with Gaussian level l.
struct GaussianPyramid {
  std::vector<ImagePlane> levels;
};

struct LaplacianPyramid {
  std::vector<ImagePlane> levels;
};

// Low-pass with the 5-tap binomial kernel, then keep even-indexed samples.
// Output dimensions are the rounded-up halves.
ImagePlane reduce(const ImagePlane& img);

// Zero-insertion upsample to exactly (target_w, target_h) followed by the
// reduce kernel scaled x2, so flat signals keep their level. target must be
// 2n or 2n - 1 per axis.
ImagePlane expand(const ImagePlane& img, int target_w, int target_h);

struct Pyramids {
  GaussianPyramid gauss;
  LaplacianPyramid lap;
};

// Guarantees gauss.levels[l] == lap.levels[l] + expand(gauss.levels[l + 1])
// to within accumulated rounding error.
Pyramids decompose(const ImagePlane& img, int depth);

struct PyramidPair {
  Pyramids ref;
  Pyramids test;
};

PyramidPair decompose_pair(const ImagePlane& ref, const ImagePlane& test, int depth);

}  // namespace srif
