#pragma once

#include <string>
#include <vector>

#include "srif/image.hpp"

namespace srif {

struct ManifestEntry {
  std::string ref_path;   // resolved against the manifest's directory
  std::string test_path;  // resolved likewise
  double mos = 0.0;
  std::string algorithm;
  int scale_factor = 1;
  std::string split;  // train, test, or all
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> warnings;  // duplicates and other non-fatal notes
};

// CSV with the fixed header ref_path,test_path,mos,algorithm,scale,split.
// Lines starting with '#' are comments. Relative paths are resolved against
// the manifest's directory at parse time.
Manifest parse_manifest(const std::string& path);

// Decode any image OpenCV handles and fold it to luminance in [0, 1]
// (ITU-R BT.601 weights for color inputs, 16-bit samples divided by 65535).
ImagePlane load_luminance(const std::string& path);

struct LoadedPair {
  ImagePlane reference;
  ImagePlane test;
};

LoadedPair load_pair(const ManifestEntry& entry);

// Minimal 24-bit BMP writer for deterministic fixtures; samples are clamped
// to [0, 1] and quantized to 8 bits, gray written to all three channels.
void save_gray_bmp(const ImagePlane& img, const std::string& path);

}  // namespace srif
