#include "srif/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "srif/errors.hpp"
#include "srif/eval.hpp"
#include "text.hpp"

namespace srif {

namespace {

constexpr double kDenominatorFloor = 1e-9;
constexpr int kEntropyBins = 256;

std::vector<double> residuals(std::span<const double> scores,
                              std::span<const double> mos) {
  const LogisticParams p = fit_logistic(scores, mos);
  std::vector<double> r(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    r[i] = logistic(scores[i], p) - mos[i];
  }
  return r;
}

double population_variance(std::span<const double> v) {
  const double m =
      std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size());
}

}  // namespace

double entropy_bits(const ImagePlane& img, double lo, double hi, int bins) {
  if (bins < 1) throw WeightNormalization("entropy needs at least one bin");
  if (!(hi > lo)) throw WeightNormalization("entropy support is empty");
  if (img.empty()) throw DimensionTooSmall("entropy of an empty image");

  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double scale = bins / (hi - lo);
  for (double v : img.samples()) {
    double t = (std::clamp(v, lo, hi) - lo) * scale;
    int idx = static_cast<int>(t);
    if (idx >= bins) idx = bins - 1;
    ++counts[static_cast<std::size_t>(idx)];
  }
  const double n = static_cast<double>(img.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;  // 0 log 0 = 0
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double sharpness_ratio(const PyramidPair& pair, const LpcConfig& cfg) {
  if (pair.test.gauss.levels.empty() || pair.ref.gauss.levels.size() < 2) {
    throw DimensionMismatch("sharpness ratio needs two Gaussian levels");
  }
  const double denom = lpc_si(pair.ref.gauss.levels[1], cfg);
  if (denom < kDenominatorFloor) {
    throw DegenerateReference("reference carries no sharpness");
  }
  return lpc_si(pair.test.gauss.levels[0], cfg) / denom;
}

double texture_ratio(const PyramidPair& pair, const SfConfig& cfg) {
  cfg.validate();
  if (pair.test.lap.levels.empty() || pair.ref.gauss.levels.size() < 2) {
    throw DimensionMismatch("texture ratio needs a band and a Gaussian level");
  }
  const double denom =
      entropy_bits(pair.ref.gauss.levels[1], 0.0, 1.0, kEntropyBins);
  if (denom < kDenominatorFloor) {
    throw DegenerateReference("reference carries no texture");
  }
  const ImagePlane band = normalize_band(pair.test.lap.levels[0], cfg);
  const double num = entropy_bits(band, -cfg.range, cfg.range, kEntropyBins);
  return num / denom;
}

double assorted_factor(double sr, double tr, double alpha) {
  return std::pow(sr, alpha) + std::pow(tr, alpha);
}

AssortedFeatures assorted_features(const PyramidPair& pair, const LpcConfig& lpc,
                                   const SfConfig& sf, double alpha) {
  AssortedFeatures out;
  out.sr = sharpness_ratio(pair, lpc);
  out.tr = texture_ratio(pair, sf);
  out.f = assorted_factor(out.sr, out.tr, alpha);
  return out;
}

std::pair<double, double> weights_from_variances(double v_d, double v_s) {
  if (v_d < 0.0 || v_s < 0.0) {
    throw WeightNormalization("residual variances must be nonnegative");
  }
  if (v_d + v_s <= 0.0) return {0.5, 0.5};
  const double w_d = v_s / (v_d + v_s);
  return {w_d, 1.0 - w_d};
}

void CalibrationTable::validate() const {
  if (bins.empty()) throw ParseError("calibration table has no bins");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const CalibrationBin& b = bins[i];
    if (!(b.lo < b.hi)) throw ParseError("calibration bin edges not increasing");
    if (i > 0 && bins[i - 1].hi != b.lo) {
      throw ParseError("calibration bins do not tile the f axis");
    }
    if (b.v_d < 0.0 || b.v_s < 0.0) throw ParseError("negative residual variance");
    if (std::abs(b.w_d + b.w_s - 1.0) > 1e-9) {
      throw WeightNormalization("calibration weights do not sum to 1");
    }
  }
}

CalibrationTable calibrate(std::span<const CalibrationSample> samples, int bins,
                           std::size_t min_bin_count, double alpha, double gamma,
                           const std::string& source,
                           const std::string& config_hash) {
  if (bins < 1) throw WeightNormalization("calibration needs at least one bin");
  const std::size_t n = samples.size();
  if (n < static_cast<std::size_t>(bins) * min_bin_count || n < 5) {
    throw InsufficientData("too few labeled pairs for " + std::to_string(bins) +
                           " calibration bins");
  }

  std::vector<double> d(n), s(n), mos(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = samples[i].d;
    s[i] = samples[i].s_sim;
    mos[i] = samples[i].mos;
  }
  const std::vector<double> res_d = residuals(d, mos);
  const std::vector<double> res_s = residuals(s, mos);

  // Order by f, ties broken by input position so the split is reproducible.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].f < samples[b].f;
  });
  std::vector<double> f_sorted(n);
  for (std::size_t i = 0; i < n; ++i) f_sorted[i] = samples[order[i]].f;

  // Quantile boundaries, nudged right so equal f values share a bin.
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  for (int k = 1; k < bins; ++k) {
    std::size_t b = (static_cast<std::size_t>(k) * n) / bins;
    while (b < n && b > 0 && f_sorted[b] == f_sorted[b - 1]) ++b;
    if (b > bounds.back() && b < n) bounds.push_back(b);
  }
  bounds.push_back(n);

  struct Group {
    std::size_t begin, end;
  };
  std::vector<Group> groups;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    groups.push_back({bounds[k], bounds[k + 1]});
  }

  // Merge undersized groups into their smaller neighbor until all hold.
  while (groups.size() > 1) {
    std::size_t victim = groups.size();
    for (std::size_t k = 0; k < groups.size(); ++k) {
      if (groups[k].end - groups[k].begin < min_bin_count) {
        victim = k;
        break;
      }
    }
    if (victim == groups.size()) break;
    std::size_t neighbor;
    if (victim == 0) {
      neighbor = 1;
    } else if (victim == groups.size() - 1) {
      neighbor = victim - 1;
    } else {
      const std::size_t left = groups[victim - 1].end - groups[victim - 1].begin;
      const std::size_t right = groups[victim + 1].end - groups[victim + 1].begin;
      neighbor = right < left ? victim + 1 : victim - 1;
    }
    const std::size_t a = std::min(victim, neighbor);
    const std::size_t b = std::max(victim, neighbor);
    groups[a].end = groups[b].end;
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
  }

  CalibrationTable table;
  table.alpha = alpha;
  table.gamma = gamma;
  table.source = source;
  table.config_hash = config_hash;
  table.bins.reserve(groups.size());

  for (std::size_t k = 0; k < groups.size(); ++k) {
    const Group& g = groups[k];
    std::vector<double> bin_d, bin_s;
    bin_d.reserve(g.end - g.begin);
    bin_s.reserve(g.end - g.begin);
    for (std::size_t i = g.begin; i < g.end; ++i) {
      bin_d.push_back(res_d[order[i]]);
      bin_s.push_back(res_s[order[i]]);
    }

    CalibrationBin bin;
    bin.count = g.end - g.begin;
    // Shared edges at the midpoint between neighboring f values keep the
    // bins tiling and strictly increasing.
    bin.lo = k == 0 ? f_sorted.front()
                    : 0.5 * (f_sorted[g.begin - 1] + f_sorted[g.begin]);
    bin.hi = k == groups.size() - 1
                 ? f_sorted.back()
                 : 0.5 * (f_sorted[g.end - 1] + f_sorted[g.end]);
    if (!(bin.hi > bin.lo)) {
      bin.hi = bin.lo + std::max(1e-12, std::abs(bin.lo) * 1e-12);
    }
    bin.v_d = population_variance(bin_d);
    bin.v_s = population_variance(bin_s);
    bin.degenerate = bin.v_d + bin.v_s <= 0.0;
    std::tie(bin.w_d, bin.w_s) = weights_from_variances(bin.v_d, bin.v_s);
    table.bins.push_back(bin);
  }
  table.validate();
  return table;
}

std::pair<double, double> lookup_weights(const CalibrationTable& table, double f) {
  if (table.bins.empty()) throw ParseError("lookup on an empty table");
  if (f < table.bins.front().lo) {
    return {table.bins.front().w_d, table.bins.front().w_s};
  }
  for (const CalibrationBin& b : table.bins) {
    if (f < b.hi) return {b.w_d, b.w_s};
  }
  return {table.bins.back().w_d, table.bins.back().w_s};
}

double srif_index(double d, double s_sim, double w_d, double w_s) {
  if (std::abs(w_d + w_s - 1.0) > 1e-9) {
    throw WeightNormalization("index weights must sum to 1");
  }
  return w_d * d + w_s * s_sim;
}

std::string serialize_table(const CalibrationTable& table) {
  std::string out;
  out += "srif-calibration-table v1\n";
  out += "alpha = " + detail::format_g17(table.alpha) + "\n";
  out += "gamma = " + detail::format_g17(table.gamma) + "\n";
  out += "config = " + table.config_hash + "\n";
  out += "source = " + table.source + "\n";
  out += "bins = " + std::to_string(table.bins.size()) + "\n";
  out += "# lo hi v_d v_s w_d w_s count degenerate\n";
  for (const CalibrationBin& b : table.bins) {
    out += detail::format_g17(b.lo) + " " + detail::format_g17(b.hi) + " " +
           detail::format_g17(b.v_d) + " " + detail::format_g17(b.v_s) + " " +
           detail::format_g17(b.w_d) + " " + detail::format_g17(b.w_s) + " " +
           std::to_string(b.count) + " " + (b.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

CalibrationTable parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;

  if (!std::getline(in, line) ||
      std::string(detail::trim(line)) != "srif-calibration-table v1") {
    throw ParseError("not a calibration table (bad header)");
  }

  CalibrationTable table;
  std::size_t declared_bins = 0;
  bool in_bins = false;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;

    if (!in_bins) {
      const std::size_t eq = t.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("table line " + std::to_string(lineno) +
                         ": expected key = value");
      }
      const std::string key(detail::trim(t.substr(0, eq)));
      const std::string value(detail::trim(t.substr(eq + 1)));
      try {
        if (key == "alpha") {
          table.alpha = std::stod(value);
        } else if (key == "gamma") {
          table.gamma = std::stod(value);
        } else if (key == "config") {
          table.config_hash = value;
        } else if (key == "source") {
          table.source = value;
        } else if (key == "bins") {
          declared_bins = std::stoul(value);
          in_bins = true;
        } else {
          throw ParseError("table line " + std::to_string(lineno) +
                           ": unknown key '" + key + "'");
        }
      } catch (const std::invalid_argument&) {
        throw ParseError("table line " + std::to_string(lineno) +
                         ": bad number '" + value + "'");
      } catch (const std::out_of_range&) {
        throw ParseError("table line " + std::to_string(lineno) +
                         ": number out of range '" + value + "'");
      }
      continue;
    }

    CalibrationBin b;
    int degenerate = 0;
    std::istringstream row{std::string(t)};
    if (!(row >> b.lo >> b.hi >> b.v_d >> b.v_s >> b.w_d >> b.w_s >> b.count >>
          degenerate)) {
      throw ParseError("table line " + std::to_string(lineno) + ": bad bin row");
    }
    b.degenerate = degenerate != 0;
    table.bins.push_back(b);
  }

  if (table.bins.size() != declared_bins) {
    throw ParseError("table declares " + std::to_string(declared_bins) +
                     " bins but carries " + std::to_string(table.bins.size()));
  }
  table.validate();
  return table;
}

CalibrationTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open calibration table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

void save_table(const CalibrationTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write calibration table '" + path + "'");
  out << serialize_table(table);
}

}  // namespace srif
