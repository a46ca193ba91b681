#include "srif/statistical_fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srif/errors.hpp"
#include "srif/filter.hpp"

namespace srif {

SfConfig::SfConfig() { level_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3}; }

void SfConfig::validate() const {
  if (norm_window < 3 || norm_window % 2 == 0) {
    throw WeightNormalization("sf.norm_window must be odd and at least 3");
  }
  if (c <= 0.0) throw WeightNormalization("sf.c must be positive");
  if (bins < 2) throw WeightNormalization("sf.bins must be at least 2");
  if (range <= 0.0) throw WeightNormalization("sf.range must be positive");
  if (eps <= 0.0) throw WeightNormalization("sf.eps must be positive");
  if (gamma <= 0.0) throw WeightNormalization("sf.gamma must be positive");
  if (level_weights.empty()) throw WeightNormalization("sf.level_weights is empty");
  double sum = 0.0;
  for (double w : level_weights) {
    if (w < 0.0) throw WeightNormalization("sf.level_weights has a negative entry");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw WeightNormalization("sf.level_weights must sum to 1");
  }
}

ImagePlane normalize_band(const ImagePlane& band, const SfConfig& cfg) {
  if (band.width() < cfg.norm_window || band.height() < cfg.norm_window) {
    throw DimensionTooSmall("band smaller than the normalization window");
  }
  const std::vector<double> box(static_cast<std::size_t>(cfg.norm_window),
                                1.0 / cfg.norm_window);
  const ImagePlane mu = separable_filter(band, box, box);
  ImagePlane sq(band.width(), band.height());
  {
    auto src = band.samples();
    auto dst = sq.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] * src[i];
  }
  const ImagePlane m2 = separable_filter(sq, box, box);

  ImagePlane out(band.width(), band.height());
  for (int y = 0; y < band.height(); ++y) {
    for (int x = 0; x < band.width(); ++x) {
      const double m = mu(x, y);
      double var = m2(x, y) - m * m;
      if (var < 0.0) var = 0.0;
      out(x, y) = (band(x, y) - m) / (std::sqrt(var) + cfg.c);
    }
  }
  return out;
}

BandHistogram histogram_over(const ImagePlane& band, double lo, double hi,
                             int bins, double eps) {
  if (bins < 1) throw WeightNormalization("histogram needs at least one bin");
  if (!(hi > lo)) throw WeightNormalization("histogram support is empty");
  if (band.empty()) throw DimensionTooSmall("histogram of an empty band");

  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double scale = bins / (hi - lo);
  for (double v : band.samples()) {
    double t = (std::clamp(v, lo, hi) - lo) * scale;
    int idx = static_cast<int>(t);
    if (idx >= bins) idx = bins - 1;
    ++counts[static_cast<std::size_t>(idx)];
  }

  BandHistogram h;
  h.lo = lo;
  h.hi = hi;
  h.samples = band.size();
  h.p.resize(counts.size());
  const double total = static_cast<double>(band.size()) + bins * eps;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    h.p[i] = (static_cast<double>(counts[i]) + eps) / total;
  }
  return h;
}

BandHistogram band_histogram(const ImagePlane& band, const SfConfig& cfg) {
  return histogram_over(band, -cfg.range, cfg.range, cfg.bins, cfg.eps);
}

double kld(const BandHistogram& p, const BandHistogram& q) {
  if (p.p.size() != q.p.size() || p.lo != q.lo || p.hi != q.hi) {
    throw EdgeMismatch("histograms use different binnings");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    if (p.p[i] > 0.0) sum += p.p[i] * std::log(p.p[i] / q.p[i]);
  }
  return sum;
}

SfResult sf_total(const PyramidPair& pair, const SfConfig& cfg) {
  cfg.validate();
  const std::size_t levels = cfg.level_weights.size();
  if (pair.ref.lap.levels.size() < levels ||
      pair.test.lap.levels.size() < levels) {
    throw DimensionMismatch("pyramid shallower than sf.level_weights");
  }

  SfResult r;
  r.level_klds.reserve(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    const BandHistogram ref_h =
        band_histogram(normalize_band(pair.ref.lap.levels[l], cfg), cfg);
    const BandHistogram test_h =
        band_histogram(normalize_band(pair.test.lap.levels[l], cfg), cfg);
    const double d = kld(ref_h, test_h);
    r.level_klds.push_back(d);
    r.raw += cfg.level_weights[l] * d;
  }
  r.sim = std::exp(-cfg.gamma * r.raw);
  return r;
}

}  // namespace srif
