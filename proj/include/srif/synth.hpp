#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "srif/image.hpp"
#include "srif/scoring.hpp"

namespace srif::synth {

// Multi-octave lattice noise, min-max normalized into [0.05, 0.95]. The same
// arguments always produce the same image.
ImagePlane value_noise(int width, int height, int octaves, double persistence,
                       std::uint64_t seed);

// richness in [0, 1] trades smooth blobs for fine texture; a step edge is
// blended in for structure.
ImagePlane textured_image(int width, int height, double richness,
                          std::uint64_t seed);

// Truncated-kernel Gaussian blur with mirrored borders. sigma <= 0 is a copy.
ImagePlane gaussian_blur(const ImagePlane& img, double sigma);

// Additive white Gaussian noise, clamped back to [0, 1].
ImagePlane add_noise(const ImagePlane& img, double sigma, std::uint64_t seed);

struct SynthOptions {
  int contents = 13;
  int severities = 4;
  int width = 160;
  int height = 160;
  std::uint64_t seed = 20240901;
  double mos_noise = 2.0;
};

// Writes BMP pairs plus manifest.csv with planted opinion scores into
// out_dir. The opinion model mixes both fidelity measures with a mix that
// shifts toward the statistical side as the assorted factor grows, so
// calibration on this data has a known shape. Every sixth content goes to
// the test split, the rest to train. Returns the manifest path.
std::string generate_labeled_dataset(const SynthOptions& opt, const RunConfig& cfg,
                                     const std::string& out_dir, std::ostream* log);

}  // namespace srif::synth
