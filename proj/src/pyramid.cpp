#include "srif/pyramid.hpp"

#include <array>
#include <string>

#include "srif/errors.hpp"
#include "srif/filter.hpp"

namespace srif {

namespace {

constexpr std::array<double, 5> kBinomial = {1.0 / 16, 4.0 / 16, 6.0 / 16,
                                             4.0 / 16, 1.0 / 16};

}  // namespace

ImagePlane reduce(const ImagePlane& img) {
  if (img.empty()) throw DimensionTooSmall("reduce on empty image");
  const ImagePlane low = separable_filter(img, kBinomial, kBinomial);
  const int ow = (img.width() + 1) / 2;
  const int oh = (img.height() + 1) / 2;
  ImagePlane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      out(x, y) = low(2 * x, 2 * y);
    }
  }
  return out;
}

ImagePlane expand(const ImagePlane& img, int target_w, int target_h) {
  if (img.empty()) throw DimensionTooSmall("expand on empty image");
  const int w = img.width();
  const int h = img.height();
  const bool w_ok = target_w == 2 * w || target_w == 2 * w - 1;
  const bool h_ok = target_h == 2 * h || target_h == 2 * h - 1;
  if (!w_ok || !h_ok) {
    throw DimensionMismatch("expand target must be double or double minus one");
  }

  ImagePlane up(target_w, target_h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      up(2 * x, 2 * y) = img(x, y);
    }
  }
  // The x2 gain restores unit DC response: half the inserted samples are zero.
  std::array<double, 5> taps = kBinomial;
  for (double& t : taps) t *= 2.0;
  return separable_filter(up, taps, taps);
}

Pyramids decompose(const ImagePlane& img, int depth) {
  if (depth < 2) throw DimensionTooSmall("pyramid depth must be at least 2");
  const int min_dim = img.width() < img.height() ? img.width() : img.height();
  if (min_dim < (1 << (depth - 1))) {
    throw DimensionTooSmall("image too small for pyramid depth " +
                            std::to_string(depth));
  }

  Pyramids p;
  p.gauss.levels.reserve(depth);
  p.gauss.levels.push_back(img);
  for (int l = 1; l < depth; ++l) {
    p.gauss.levels.push_back(reduce(p.gauss.levels.back()));
  }

  p.lap.levels.reserve(depth - 1);
  for (int l = 0; l + 1 < depth; ++l) {
    const ImagePlane& fine = p.gauss.levels[l];
    const ImagePlane back =
        expand(p.gauss.levels[l + 1], fine.width(), fine.height());
    ImagePlane band(fine.width(), fine.height());
    for (int y = 0; y < fine.height(); ++y) {
      for (int x = 0; x < fine.width(); ++x) {
        band(x, y) = fine(x, y) - back(x, y);
      }
    }
    p.lap.levels.push_back(std::move(band));
  }
  return p;
}

PyramidPair decompose_pair(const ImagePlane& ref, const ImagePlane& test,
                           int depth) {
  if (ref.width() != test.width() || ref.height() != test.height()) {
    throw DimensionMismatch("reference and test dimensions differ");
  }
  PyramidPair pair;
  pair.ref = decompose(ref, depth);
  pair.test = decompose(test, depth);
  return pair;
}

}  // namespace srif
