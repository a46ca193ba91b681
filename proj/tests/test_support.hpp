#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "srif/image.hpp"
#include "srif/synth.hpp"

namespace support {

// Uniform random raster in [0, 1]; purely for exercising numerics.
inline srif::ImagePlane random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  srif::ImagePlane img(w, h);
  for (double& v : img.samples()) v = uni(rng);
  return img;
}

// Natural-ish stimulus with edges and texture via the synthesis module.
inline srif::ImagePlane textured(int w, int h, std::uint64_t seed,
                                 double richness = 0.7) {
  return srif::synth::textured_image(w, h, richness, seed);
}

inline srif::ImagePlane blurred(const srif::ImagePlane& img, double sigma) {
  return srif::synth::gaussian_blur(img, sigma);
}

// Fresh directory under the system temp root, removed by the caller if at
// all; leaking temp dirs across test runs is acceptable.
inline std::string fresh_temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path() /
                   ("srif_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace support
