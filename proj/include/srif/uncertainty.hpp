#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srif/image.hpp"
#include "srif/lpc.hpp"
#include "srif/pyramid.hpp"
#include "srif/statistical_fidelity.hpp"

namespace srif {

// Shannon entropy in bits of the unsmoothed 256-bin (by default) histogram
// over [lo, hi]; out-of-range samples are clamped in.
double entropy_bits(const ImagePlane& img, double lo, double hi, int bins);

// Sharpness of the test image at full resolution against the reference one
// octave down: upscaling cannot add local phase coherence, so values above 1
// flag hallucinated detail.
double sharpness_ratio(const PyramidPair& pair, const LpcConfig& cfg);

// Entropy of the test's finest normalized band against the entropy of the
// reference one octave down.
double texture_ratio(const PyramidPair& pair, const SfConfig& cfg);

// f = sr^alpha + tr^alpha, the scalar the weighting table is indexed by.
double assorted_factor(double sr, double tr, double alpha);

struct AssortedFeatures {
  double sr = 0.0;
  double tr = 0.0;
  double f = 0.0;
};

AssortedFeatures assorted_features(const PyramidPair& pair, const LpcConfig& lpc,
                                   const SfConfig& sf, double alpha);

struct CalibrationBin {
  double lo = 0.0;
  double hi = 0.0;
  double v_d = 0.0;  // residual variance of the deterministic measure
  double v_s = 0.0;  // residual variance of the statistical measure
  double w_d = 0.5;
  double w_s = 0.5;
  std::size_t count = 0;
  bool degenerate = false;  // both variances vanished; weights fell back
};

struct CalibrationTable {
  std::vector<CalibrationBin> bins;
  double alpha = 1.0;
  double gamma = 10.0;
  std::string source;
  std::string config_hash;  // 16 hex digits of the producing run

  void validate() const;
};

struct CalibrationSample {
  double d = 0.0;
  double s_sim = 0.0;
  double f = 0.0;
  double mos = 0.0;
};

// Inverse-variance weights: w_d = v_s / (v_d + v_s) and its complement.
// Both variances zero means neither measure is more trustworthy, so the
// weights fall back to one half each.
std::pair<double, double> weights_from_variances(double v_d, double v_s);

// Fit both measures against opinion, bin the residuals by quantiles of f
// (bins thinner than min_bin_count are merged), and convert per-bin residual
// variances into inverse-variance weights.
CalibrationTable calibrate(std::span<const CalibrationSample> samples, int bins,
                           std::size_t min_bin_count, double alpha, double gamma,
                           const std::string& source,
                           const std::string& config_hash);

// Out-of-range f clamps to the nearest bin; interior lookups are half-open
// [lo, hi).
std::pair<double, double> lookup_weights(const CalibrationTable& table, double f);

// Weighted blend of the two fidelities. Weights must form a unit partition.
double srif_index(double d, double s_sim, double w_d, double w_s);

std::string serialize_table(const CalibrationTable& table);
CalibrationTable parse_table(const std::string& text);
CalibrationTable load_table(const std::string& path);
void save_table(const CalibrationTable& table, const std::string& path);

}  // namespace srif
