#pragma once

#include "srif/image.hpp"

namespace srif {

struct LpcConfig {
  // The phase-prediction relation below is specific to three dyadic scales.
  int scales = 3;
  int orientations = 8;
  // Center wavelength of the finest scale, in pixels.
  double wavelength0 = 2.0;
  // Radial log-Gaussian bandwidth parameter (sigma as a fraction of the
  // center frequency).
  double sigma_on_f = 0.55;
  // Angular sigma = (pi / orientations) / theta_sigma_ratio.
  double theta_sigma_ratio = 1.3;
  // Stabilizer in the coherence-to-energy ratio.
  double c_stab = 2.0 / 255.0;
  // Rank weights decay as exp(-rank / ((n - 1) * rank_decay)): small values
  // concentrate the pool on the sharpest locations.
  double rank_decay = 0.02;
  // Fraction of the ranked map admitted to the pool.
  double pool_fraction = 1.0;

  void validate() const;
};

// Sharpness index in [0, 1] from the local coherence of band-pass phase
// across scales. Needs both dimensions >= 32; returns 0 for images with no
// band-pass energy.
double lpc_si(const ImagePlane& img, const LpcConfig& cfg);

}  // namespace srif
