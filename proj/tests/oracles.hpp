#pragma once

// Independent brute-force references the library is checked against. These
// work straight from the definitions (explicit window loops, direct rank
// counting) and deliberately share no code with the implementation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "srif/deterministic_fidelity.hpp"
#include "srif/eval.hpp"
#include "srif/image.hpp"
#include "srif/statistical_fidelity.hpp"

namespace oracle {

inline int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

inline std::vector<double> gaussian_taps(int length, double sigma) {
  std::vector<double> t(static_cast<std::size_t>(length));
  const int half = length / 2;
  double sum = 0.0;
  for (int i = 0; i < length; ++i) {
    t[static_cast<std::size_t>(i)] =
        std::exp(-0.5 * (i - half) * (i - half) / (sigma * sigma));
    sum += t[static_cast<std::size_t>(i)];
  }
  for (double& v : t) v /= sum;
  return t;
}

// Dense 2D correlation at one output sample, mirrored borders.
inline double filter_at(const srif::ImagePlane& img, std::span<const double> kx,
                        std::span<const double> ky, int x, int y) {
  const int rx = static_cast<int>(kx.size()) / 2;
  const int ry = static_cast<int>(ky.size()) / 2;
  double acc = 0.0;
  for (std::size_t j = 0; j < ky.size(); ++j) {
    for (std::size_t i = 0; i < kx.size(); ++i) {
      const int sx = reflect(x + static_cast<int>(i) - rx, img.width());
      const int sy = reflect(y + static_cast<int>(j) - ry, img.height());
      acc += kx[i] * ky[j] * img(sx, sy);
    }
  }
  return acc;
}

inline srif::ImagePlane reduce(const srif::ImagePlane& img) {
  const std::vector<double> k = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16,
                                 1.0 / 16};
  const int ow = (img.width() + 1) / 2;
  const int oh = (img.height() + 1) / 2;
  srif::ImagePlane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      out(x, y) = filter_at(img, k, k, 2 * x, 2 * y);
    }
  }
  return out;
}

inline srif::ImagePlane expand(const srif::ImagePlane& img, int tw, int th) {
  const std::vector<double> k = {2.0 / 16, 8.0 / 16, 12.0 / 16, 8.0 / 16,
                                 2.0 / 16};
  srif::ImagePlane up(tw, th, 0.0);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      up(2 * x, 2 * y) = img(x, y);
    }
  }
  srif::ImagePlane out(tw, th);
  for (int y = 0; y < th; ++y) {
    for (int x = 0; x < tw; ++x) {
      out(x, y) = filter_at(up, k, k, x, y);
    }
  }
  return out;
}

struct LocalStructure {
  double value = 0.0;
  double weight = 0.0;
};

// Windowed comparison at one valid-region position (x, y are offsets into
// the valid map, i.e. the window covers [x, x + n) x [y, y + n)).
inline LocalStructure structure_at(const srif::ImagePlane& ref,
                                   const srif::ImagePlane& test,
                                   const srif::DfConfig& cfg, int x, int y) {
  const auto g = gaussian_taps(cfg.window, cfg.window_sigma);
  double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
  for (int j = 0; j < cfg.window; ++j) {
    for (int i = 0; i < cfg.window; ++i) {
      const double w = g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
      const double a = ref(x + i, y + j);
      const double b = test(x + i, y + j);
      mx += w * a;
      my += w * b;
      mxx += w * a * a;
      myy += w * b * b;
      mxy += w * a * b;
    }
  }
  double vx = std::max(0.0, mxx - mx * mx);
  double vy = std::max(0.0, myy - my * my);
  const double cxy = mxy - mx * my;

  LocalStructure out;
  out.value = (cxy + cfg.c1) / (std::sqrt(vx) * std::sqrt(vy) + cfg.c1);
  const double arg = (1.0 + vx / cfg.cw) * (1.0 + vy / cfg.cw) -
                     (cxy * cxy) / (cfg.cw * cfg.cw);
  out.weight = std::log2(std::max(1.0, arg));
  return out;
}

inline double pool(std::span<const double> values, std::span<const double> weights) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += (weights[i] + 1e-12) * values[i];
    den += weights[i] + 1e-12;
  }
  return num / den;
}

inline double normalize_at(const srif::ImagePlane& band, const srif::SfConfig& cfg,
                           int x, int y) {
  const int r = cfg.norm_window / 2;
  double sum = 0.0, sq = 0.0;
  for (int j = -r; j <= r; ++j) {
    for (int i = -r; i <= r; ++i) {
      const double v = band(reflect(x + i, band.width()), reflect(y + j, band.height()));
      sum += v;
      sq += v * v;
    }
  }
  const double n = static_cast<double>(cfg.norm_window) * cfg.norm_window;
  const double mu = sum / n;
  const double var = std::max(0.0, sq / n - mu * mu);
  return (band(x, y) - mu) / (std::sqrt(var) + cfg.c);
}

inline std::vector<double> histogram(std::span<const double> samples, double lo,
                                     double hi, int bins, double eps) {
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : samples) {
    const double c = std::min(hi, std::max(lo, v));
    int idx = static_cast<int>((c - lo) / (hi - lo) * bins);
    if (idx >= bins) idx = bins - 1;
    counts[static_cast<std::size_t>(idx)] += 1.0;
  }
  const double total = static_cast<double>(samples.size()) + bins * eps;
  for (double& c : counts) c = (c + eps) / total;
  return counts;
}

inline double kld(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

inline double entropy_bits(std::span<const double> samples, double lo, double hi,
                           int bins) {
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : samples) {
    const double c = std::min(hi, std::max(lo, v));
    int idx = static_cast<int>((c - lo) / (hi - lo) * bins);
    if (idx >= bins) idx = bins - 1;
    counts[static_cast<std::size_t>(idx)] += 1.0;
  }
  double h = 0.0;
  for (double c : counts) {
    if (c == 0.0) continue;
    const double p = c / static_cast<double>(samples.size());
    h -= p * std::log2(p);
  }
  return h;
}

inline std::vector<double> ranks(std::span<const double> v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      if (v[j] == v[i]) ++equal;
    }
    // rank = 1 + (#smaller) + (#equal - 1) / 2
    r[i] = 1.0 + static_cast<double>(less) +
           (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return r;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  const double ma = sa / n, mb = sb / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double srcc(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  return pearson(ra, rb);
}

inline double krcc(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double c = 0, d = 0, ta = 0, tb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sa = a[i] - a[j];
      const double sb = b[i] - b[j];
      if (sa == 0.0 && sb == 0.0) continue;
      if (sa == 0.0) {
        ++ta;
      } else if (sb == 0.0) {
        ++tb;
      } else if (sa * sb > 0.0) {
        ++c;
      } else {
        ++d;
      }
    }
  }
  return (c - d) / std::sqrt((c + d + tb) * (c + d + ta));
}

inline double logistic(double x, const srif::LogisticParams& p) {
  return p.beta1 * (0.5 - 1.0 / (1.0 + std::exp(p.beta2 * (x - p.beta3)))) +
         p.beta4 * x + p.beta5;
}

struct PlccRmse {
  double plcc = 0.0;
  double rmse = 0.0;
};

inline PlccRmse plcc_rmse(std::span<const double> scores,
                          std::span<const double> mos,
                          const srif::LogisticParams& p) {
  std::vector<double> mapped(scores.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    mapped[i] = oracle::logistic(scores[i], p);
    sq += (mapped[i] - mos[i]) * (mapped[i] - mos[i]);
  }
  return {pearson(mapped, mos), std::sqrt(sq / static_cast<double>(scores.size()))};
}

}  // namespace oracle
