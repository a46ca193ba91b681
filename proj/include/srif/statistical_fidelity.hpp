#pragma once

#include <cstddef>
#include <vector>

#include "srif/image.hpp"
#include "srif/pyramid.hpp"

namespace srif {

struct SfConfig {
  int norm_window = 3;
  // Stabilizer added to the local deviation before dividing.
  double c = 1e-3;
  int bins = 128;
  // Histogram support is [-range, range]; samples outside are clamped in.
  double range = 4.0;
  // Additive smoothing mass per bin so the divergence stays finite.
  double eps = 1e-4;
  // Rate of the raw-to-similarity mapping exp(-gamma * raw).
  double gamma = 10.0;
  // One weight per Laplacian band, unit sum.
  std::vector<double> level_weights;

  SfConfig();
  void validate() const;
};

struct BandHistogram {
  std::vector<double> p;  // probabilities, unit sum
  double lo = 0.0;
  double hi = 0.0;
  std::size_t samples = 0;
};

// Divisive normalization: subtract the local mean and divide by the local
// deviation plus the stabilizer, window-sized box statistics with mirrored
// borders. Output is the same size as the input.
ImagePlane normalize_band(const ImagePlane& band, const SfConfig& cfg);

// Fixed-bin smoothed histogram over [lo, hi]. eps = 0 gives raw frequencies.
BandHistogram histogram_over(const ImagePlane& band, double lo, double hi,
                             int bins, double eps);

BandHistogram band_histogram(const ImagePlane& band, const SfConfig& cfg);

// Kullback-Leibler divergence sum(p * ln(p / q)) in nats; p is the reference
// side. Histograms must share their binning exactly.
double kld(const BandHistogram& p, const BandHistogram& q);

struct SfResult {
  double raw = 0.0;
  double sim = 1.0;
  std::vector<double> level_klds;
};

// Weighted divergence across the Laplacian bands of the pair, reference
// distribution first, plus its exponential similarity mapping.
SfResult sf_total(const PyramidPair& pair, const SfConfig& cfg);

}  // namespace srif
