#include "srif/deterministic_fidelity.hpp"

#include <cmath>
#include <string>

#include "srif/errors.hpp"
#include "srif/filter.hpp"

namespace srif {

namespace {

constexpr double kPoolWeightFloor = 1e-12;

void check_unit_sum(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw WeightNormalization(std::string(what) + " is empty");
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) throw WeightNormalization(std::string(what) + " has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw WeightNormalization(std::string(what) + " must sum to 1");
  }
}

ImagePlane product_plane(const ImagePlane& a, const ImagePlane& b) {
  ImagePlane out(a.width(), a.height());
  auto pa = a.samples();
  auto pb = b.samples();
  auto po = out.samples();
  for (std::size_t i = 0; i < po.size(); ++i) po[i] = pa[i] * pb[i];
  return out;
}

struct MomentMaps {
  ImagePlane mx, my, vx, vy, cxy;
};

MomentMaps window_moments(const ImagePlane& ref, const ImagePlane& test,
                          const DfConfig& cfg) {
  if (ref.width() != test.width() || ref.height() != test.height()) {
    throw DimensionMismatch("structure_map inputs differ in size");
  }
  if (ref.width() < cfg.window || ref.height() < cfg.window) {
    throw DimensionTooSmall("image smaller than the comparison window");
  }
  const auto g = gaussian_window(cfg.window, cfg.window_sigma);

  MomentMaps m;
  m.mx = valid_window_sums(ref, g, g);
  m.my = valid_window_sums(test, g, g);
  const ImagePlane mxx = valid_window_sums(product_plane(ref, ref), g, g);
  const ImagePlane myy = valid_window_sums(product_plane(test, test), g, g);
  const ImagePlane mxy = valid_window_sums(product_plane(ref, test), g, g);

  const int ow = m.mx.width();
  const int oh = m.mx.height();
  m.vx = ImagePlane(ow, oh);
  m.vy = ImagePlane(ow, oh);
  m.cxy = ImagePlane(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      const double ex = m.mx(x, y);
      const double ey = m.my(x, y);
      double vx = mxx(x, y) - ex * ex;
      double vy = myy(x, y) - ey * ey;
      if (vx < 0.0) vx = 0.0;
      if (vy < 0.0) vy = 0.0;
      m.vx(x, y) = vx;
      m.vy(x, y) = vy;
      m.cxy(x, y) = mxy(x, y) - ex * ey;
    }
  }
  return m;
}

double info_weight(double vx, double vy, double cxy, double cw) {
  // Mutual information of a Gaussian channel with noise variance cw on both
  // inputs; never negative, zero exactly when both windows are constant.
  const double arg =
      (1.0 + vx / cw) * (1.0 + vy / cw) - (cxy * cxy) / (cw * cw);
  return std::log2(arg < 1.0 ? 1.0 : arg);
}

}  // namespace

DfConfig::DfConfig() {
  // Dyadic-scale exponents in the MS-SSIM tradition, renormalized to an
  // exact unit sum.
  scale_exponents = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  double sum = 0.0;
  for (double a : scale_exponents) sum += a;
  for (double& a : scale_exponents) a /= sum;
  level_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
}

void DfConfig::validate() const {
  if (window < 3 || window % 2 == 0) {
    throw WeightNormalization("df.window must be odd and at least 3");
  }
  if (window_sigma <= 0.0) throw WeightNormalization("df.window_sigma must be positive");
  if (c1 <= 0.0) throw WeightNormalization("df.c1 must be positive");
  if (cw <= 0.0) throw WeightNormalization("df.cw must be positive");
  if (pooled_floor <= 0.0 || pooled_floor >= 1.0) {
    throw WeightNormalization("df.pooled_floor must lie in (0, 1)");
  }
  check_unit_sum(scale_exponents, "df.scale_exponents");
  check_unit_sum(level_weights, "df.level_weights");
}

DfMap structure_map(const ImagePlane& ref, const ImagePlane& test,
                    const DfConfig& cfg) {
  const MomentMaps m = window_moments(ref, test, cfg);
  const int ow = m.mx.width();
  const int oh = m.mx.height();

  DfMap map;
  map.width = ow;
  map.height = oh;
  map.values.resize(static_cast<std::size_t>(ow) * oh);
  map.weights.resize(map.values.size());
  std::size_t i = 0;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x, ++i) {
      const double vx = m.vx(x, y);
      const double vy = m.vy(x, y);
      const double cxy = m.cxy(x, y);
      map.values[i] =
          (cxy + cfg.c1) / (std::sqrt(vx) * std::sqrt(vy) + cfg.c1);
      map.weights[i] = info_weight(vx, vy, cxy, cfg.cw);
    }
  }
  return map;
}

ImagePlane information_weights(const ImagePlane& ref, const ImagePlane& test,
                               const DfConfig& cfg) {
  const MomentMaps m = window_moments(ref, test, cfg);
  const int ow = m.mx.width();
  const int oh = m.mx.height();
  ImagePlane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      out(x, y) = info_weight(m.vx(x, y), m.vy(x, y), m.cxy(x, y), cfg.cw);
    }
  }
  return out;
}

double pool_df_map(const DfMap& map) {
  if (map.values.empty()) throw DimensionTooSmall("pooling an empty map");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double w = map.weights[i] + kPoolWeightFloor;
    num += w * map.values[i];
    den += w;
  }
  return num / den;
}

double df_level(const ImagePlane& ref, const ImagePlane& test,
                const DfConfig& cfg) {
  cfg.validate();
  const int scales = static_cast<int>(cfg.scale_exponents.size());

  std::vector<double> pooled;
  ImagePlane cur_ref = ref;
  ImagePlane cur_test = test;
  for (int s = 0; s < scales; ++s) {
    if (cur_ref.width() < cfg.window || cur_ref.height() < cfg.window) break;
    pooled.push_back(pool_df_map(structure_map(cur_ref, cur_test, cfg)));
    if (s + 1 < scales) {
      cur_ref = reduce(cur_ref);
      cur_test = reduce(cur_test);
    }
  }
  if (pooled.empty()) {
    throw DimensionTooSmall("level supports none of the comparison scales");
  }

  double exp_sum = 0.0;
  for (std::size_t s = 0; s < pooled.size(); ++s) exp_sum += cfg.scale_exponents[s];
  double value = 1.0;
  for (std::size_t s = 0; s < pooled.size(); ++s) {
    const double base =
        pooled[s] < cfg.pooled_floor ? cfg.pooled_floor : pooled[s];
    value *= std::pow(base, cfg.scale_exponents[s] / exp_sum);
  }
  return value;
}

double df_total(const PyramidPair& pair, const DfConfig& cfg) {
  cfg.validate();
  const std::size_t levels = cfg.level_weights.size();
  if (pair.ref.gauss.levels.size() < levels ||
      pair.test.gauss.levels.size() < levels) {
    throw DimensionMismatch("pyramid shallower than df.level_weights");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < levels; ++l) {
    total += cfg.level_weights[l] *
             df_level(pair.ref.gauss.levels[l], pair.test.gauss.levels[l], cfg);
  }
  return total;
}

}  // namespace srif
