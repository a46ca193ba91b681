#pragma once

#include <vector>

#include "srif/image.hpp"
#include "srif/pyramid.hpp"

namespace srif {

struct DfConfig {
  int window = 11;
  double window_sigma = 1.5;
  // Structure stabilizer, (0.03)^2 on the unit dynamic range.
  double c1 = 0.0009;
  // Channel-noise variance behind the information weights, also unit range.
  double cw = 0.4 / 65025.0;
  // Per-dyadic-scale exponents, unit sum. The length sets the scale count.
  std::vector<double> scale_exponents;
  // One weight per pyramid level entering the fidelity, unit sum.
  std::vector<double> level_weights;
  // Pooled scale values are clamped here before fractional exponentiation.
  double pooled_floor = 1e-4;

  DfConfig();
  void validate() const;
};

// Local comparison over the fully interior window positions, plus the
// information weight attached to each position.
struct DfMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;   // in [-1, 1] up to rounding
  std::vector<double> weights;  // >= 0, minimal on constant regions
};

DfMap structure_map(const ImagePlane& ref, const ImagePlane& test,
                    const DfConfig& cfg);

ImagePlane information_weights(const ImagePlane& ref, const ImagePlane& test,
                               const DfConfig& cfg);

// Information-weighted mean with a uniform floor so constant images pool to
// the plain average instead of 0/0.
double pool_df_map(const DfMap& map);

// Multi-scale fidelity of one level pair: pooled values across dyadic scales
// combined with the configured exponents. Scales the level cannot support are
// dropped and the remaining exponents renormalized.
double df_level(const ImagePlane& ref, const ImagePlane& test,
                const DfConfig& cfg);

// Weighted sum of df_level over the finest Gaussian levels.
double df_total(const PyramidPair& pair, const DfConfig& cfg);

}  // namespace srif
