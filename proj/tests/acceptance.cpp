// Acceptance gate: one line per criterion, [PASS]/[FAIL]/[SKIP]. Exits
// nonzero when anything fails; skips carry the reason inline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "srif/cli.hpp"
#include "srif/dataset.hpp"
#include "srif/errors.hpp"
#include "srif/eval.hpp"
#include "srif/filter.hpp"
#include "srif/image.hpp"
#include "srif/lpc.hpp"
#include "srif/pyramid.hpp"
#include "srif/scoring.hpp"
#include "srif/statistical_fidelity.hpp"
#include "srif/synth.hpp"
#include "srif/uncertainty.hpp"
#include "test_support.hpp"

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kFail;
  std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::kPass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::kSkip, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 1. Identity suite: scoring an image against itself is the fixed point.
Outcome identity_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(11);
  const srif::RunConfig cfg;
  double worst_d = 0.0, worst_s = 0.0, worst_q = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int w = 64 + static_cast<int>(rng() % 449);
    const int h = 64 + static_cast<int>(rng() % 449);
    const srif::ImagePlane img =
        support::textured(w, h, 5000 + static_cast<std::uint64_t>(i),
                          0.3 + 0.05 * (i % 10));
    const srif::FidelityReport r = srif::score_pair(img, img, cfg, nullptr);
    worst_d = std::max(worst_d, std::abs(r.d - 1.0));
    worst_s = std::max(worst_s, std::abs(r.s_raw));
    worst_q = std::max(worst_q, std::abs(r.q_ds - 1.0));
  }
  const double elapsed = seconds_since(t0);
  if (worst_d > 1e-9) return fail("max |D-1| = " + fmt(worst_d));
  if (worst_s > 1e-10) return fail("max |S_raw| = " + fmt(worst_s));
  if (worst_q > 1e-6) return fail("max |Q_ds-1| = " + fmt(worst_q));
  if (elapsed >= 30.0) return fail("took " + fmt(elapsed) + " s (limit 30)");
  return pass("20 images, max |D-1| = " + fmt(worst_d) + ", " + fmt(elapsed) +
              " s");
}

// 2. Pyramid reconstruction error stays within 1e-6 per sample.
Outcome pyramid_reconstruction() {
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int w = 16 + static_cast<int>(rng() % 120);
    const int h = 16 + static_cast<int>(rng() % 120);
    const srif::ImagePlane img = support::random_image(w, h, rng());
    const srif::Pyramids pyr = srif::decompose(img, 4);
    for (std::size_t l = 0; l + 1 < pyr.gauss.levels.size(); ++l) {
      const srif::ImagePlane& g = pyr.gauss.levels[l];
      const srif::ImagePlane up = srif::expand(pyr.gauss.levels[l + 1],
                                               g.width(), g.height());
      for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
          worst = std::max(
              worst, std::abs(g(x, y) - (pyr.lap.levels[l](x, y) + up(x, y))));
        }
      }
    }
  }
  if (worst > 1e-6) return fail("max per-sample error = " + fmt(worst));
  return pass("50 images, max per-sample error = " + fmt(worst));
}

// 3. Brute-force oracle equivalence across the numeric core.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // structure_map and its weights against windowed scalar statistics.
  srif::DfConfig df;
  df.window = 5;
  for (int rep = 0; rep < 100; ++rep) {
    const int w = df.window + static_cast<int>(rng() % 8);
    const int h = df.window + static_cast<int>(rng() % 8);
    const srif::ImagePlane a = support::random_image(w, h, rng());
    const srif::ImagePlane b = support::random_image(w, h, rng());
    const srif::DfMap map = srif::structure_map(a, b, df);
    const int x = static_cast<int>(rng() % static_cast<unsigned>(map.width));
    const int y = static_cast<int>(rng() % static_cast<unsigned>(map.height));
    const oracle::LocalStructure ref = oracle::structure_at(a, b, df, x, y);
    const std::size_t idx =
        static_cast<std::size_t>(y) * static_cast<std::size_t>(map.width) +
        static_cast<std::size_t>(x);
    if (std::abs(map.values[idx] - ref.value) > 1e-9) {
      return fail("structure_map diverges from oracle at rep " +
                  std::to_string(rep));
    }
    if (std::abs(map.weights[idx] - ref.weight) > 1e-9) {
      return fail("information weight diverges from oracle at rep " +
                  std::to_string(rep));
    }
  }

  // Weighted pooling.
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 4 + rng() % 60;
    srif::DfMap map;
    map.width = static_cast<int>(n);
    map.height = 1;
    map.values.resize(n);
    map.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      map.values[i] = 2.0 * uni(rng) - 1.0;
      map.weights[i] = rng() % 4 == 0 ? 0.0 : 8.0 * uni(rng);
    }
    const double got = srif::pool_df_map(map);
    const double want = oracle::pool(map.values, map.weights);
    if (std::abs(got - want) > 1e-12) return fail("pooling diverges from oracle");
  }

  // Divisive normalization, histograms, and divergence.
  const srif::SfConfig sf;
  for (int rep = 0; rep < 100; ++rep) {
    const int w = 5 + static_cast<int>(rng() % 10);
    const int h = 5 + static_cast<int>(rng() % 10);
    srif::ImagePlane band = support::random_image(w, h, rng());
    for (double& v : band.samples()) v = 2.0 * v - 1.0;
    const srif::ImagePlane norm = srif::normalize_band(band, sf);
    const int x = static_cast<int>(rng() % static_cast<unsigned>(w));
    const int y = static_cast<int>(rng() % static_cast<unsigned>(h));
    if (std::abs(norm(x, y) - oracle::normalize_at(band, sf, x, y)) > 1e-9) {
      return fail("normalize_band diverges from oracle");
    }

    const srif::BandHistogram hist = srif::band_histogram(norm, sf);
    const std::vector<double> want = oracle::histogram(
        norm.samples(), -sf.range, sf.range, sf.bins, sf.eps);
    double sum = 0.0;
    for (int b = 0; b < sf.bins; ++b) {
      if (std::abs(hist.p[static_cast<std::size_t>(b)] -
                   want[static_cast<std::size_t>(b)]) > 1e-9) {
        return fail("band_histogram diverges from oracle");
      }
      sum += hist.p[static_cast<std::size_t>(b)];
    }
    if (std::abs(sum - 1.0) > 1e-12) return fail("histogram mass is not 1");

    const srif::ImagePlane other = support::random_image(w, h, rng());
    const srif::BandHistogram q = srif::band_histogram(
        srif::normalize_band(other, sf), sf);
    if (std::abs(srif::kld(hist, q) - oracle::kld(hist.p, q.p)) > 1e-9) {
      return fail("kld diverges from oracle");
    }
  }

  // Rank and accuracy statistics.
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 5 + rng() % 40;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rep % 2 == 0 ? std::round(uni(rng) * 8.0) / 8.0 : uni(rng);
      b[i] = rep % 3 == 0 ? std::round(uni(rng) * 8.0) / 8.0 : uni(rng);
    }
    if (std::abs(srif::srcc(a, b) - oracle::srcc(a, b)) > 1e-9) {
      return fail("srcc diverges from oracle");
    }
    if (std::abs(srif::krcc(a, b) - oracle::krcc(a, b)) > 1e-9) {
      return fail("krcc diverges from oracle");
    }
    const srif::LogisticParams p{30.0 * uni(rng), 1.0 + 5.0 * uni(rng),
                                 uni(rng), 10.0 * uni(rng), 50.0 * uni(rng)};
    const srif::PlccRmse got = srif::plcc_rmse(a, b, p);
    const oracle::PlccRmse want = oracle::plcc_rmse(a, b, p);
    if (std::abs(got.plcc - want.plcc) > 1e-12 ||
        std::abs(got.rmse - want.rmse) > 1e-12) {
      return fail("plcc/rmse diverge from oracle");
    }
  }

  return pass("8 function families x 100 randomized instances");
}

// 4. Blur severity orders every measure with zero violations.
Outcome blur_monotonicity() {
  const double sigmas[] = {0.5, 1.0, 2.0, 4.0};
  const srif::RunConfig cfg;
  int comparisons = 0;
  for (int i = 0; i < 5; ++i) {
    const srif::ImagePlane ref =
        support::textured(256, 256, 300 + static_cast<std::uint64_t>(i),
                          0.45 + 0.1 * i);
    double prev_d = 2.0, prev_s = -1.0, prev_lpc = 2.0;
    for (double sigma : sigmas) {
      const srif::ImagePlane test = support::blurred(ref, sigma);
      const srif::FidelityReport r = srif::score_pair(ref, test, cfg, nullptr);
      const double si = srif::lpc_si(test, cfg.lpc);
      if (!(r.d < prev_d)) {
        return fail("D not strictly decreasing at sigma " + fmt(sigma) +
                    " image " + std::to_string(i));
      }
      if (!(r.s_raw > prev_s)) {
        return fail("S_raw not strictly increasing at sigma " + fmt(sigma) +
                    " image " + std::to_string(i));
      }
      if (!(si < prev_lpc)) {
        return fail("lpc_si not strictly decreasing at sigma " + fmt(sigma) +
                    " image " + std::to_string(i));
      }
      prev_d = r.d;
      prev_s = r.s_raw;
      prev_lpc = si;
      ++comparisons;
    }
  }
  return pass(std::to_string(comparisons) + " scored pairs, zero violations");
}

// 5. Inverse-variance weighting algebra.
Outcome weighting_algebra() {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double v_d = 100.0 * uni(rng);
    const double v_s = 100.0 * uni(rng);
    const auto [w_d, w_s] = srif::weights_from_variances(v_d, v_s);
    if (std::abs(w_d - v_s / (v_d + v_s)) > 1e-15) {
      return fail("w_d formula off at rep " + std::to_string(rep));
    }
    if (w_d + w_s != 1.0) {
      return fail("weights do not sum to 1 exactly at rep " +
                  std::to_string(rep));
    }
    const double d = uni(rng);
    const double s = uni(rng);
    const double q = srif::srif_index(d, s, w_d, w_s);
    if (q < std::min(d, s) - 1e-15 || q > std::max(d, s) + 1e-15) {
      return fail("blend escapes [min, max] at rep " + std::to_string(rep));
    }
  }
  return pass("1000 random variance pairs");
}

// 6. Logistic fit recovers planted curves and tracks injected noise.
Outcome logistic_recovery() {
  const srif::LogisticParams truth{40.0, 8.0, 0.55, 5.0, 50.0};
  {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> scores(60), mos(60);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = uni(rng);
      mos[i] = srif::logistic(scores[i], truth);
    }
    const srif::LogisticParams fit = srif::fit_logistic(scores, mos);
    const double rmse = srif::plcc_rmse(scores, mos, fit).rmse;
    if (!(rmse < 1e-6)) return fail("noiseless RMSE = " + fmt(rmse));
  }
  const double sigma = 5.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::mt19937_64 rng(2000 + static_cast<std::uint64_t>(trial));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> scores(120), mos(120);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = uni(rng);
      mos[i] = srif::logistic(scores[i], truth) + noise(rng);
    }
    const srif::LogisticParams fit = srif::fit_logistic(scores, mos);
    const double rmse = srif::plcc_rmse(scores, mos, fit).rmse;
    if (rmse < 0.8 * sigma || rmse > 1.3 * sigma) {
      return fail("trial " + std::to_string(trial) + " RMSE = " + fmt(rmse) +
                  " outside [0.8, 1.3] x sigma");
    }
  }
  return pass("noiseless RMSE < 1e-6; 20 noisy trials inside the band");
}

// 7. Batch output is byte-identical across worker counts.
Outcome batch_determinism() {
  const std::string dir = support::fresh_temp_dir("accept_batch");
  std::ostringstream manifest;
  manifest << "ref_path,test_path,mos,algorithm,scale,split\n";
  for (int i = 0; i < 50; ++i) {
    const srif::ImagePlane ref =
        support::textured(64, 64, 7000 + static_cast<std::uint64_t>(i));
    const srif::ImagePlane test = support::blurred(ref, 0.4 + 0.06 * i);
    srif::save_gray_bmp(ref, dir + "/r" + std::to_string(i) + ".bmp");
    srif::save_gray_bmp(test, dir + "/t" + std::to_string(i) + ".bmp");
    manifest << "r" << i << ".bmp,t" << i << ".bmp," << 90 - i << ",alg,4,train\n";
  }
  const std::string manifest_path = dir + "/manifest.csv";
  {
    std::ofstream out(manifest_path);
    out << manifest.str();
  }

  std::string outputs[3];
  const int workers[3] = {1, 4, 8};
  for (int k = 0; k < 3; ++k) {
    srif::cli::Options opt;
    opt.cfg.workers = workers[k];
    const std::string csv = dir + "/out" + std::to_string(workers[k]) + ".csv";
    std::ostringstream err;
    if (srif::cli::cmd_batch(manifest_path, opt, csv, err) != 0) {
      return fail("batch with " + std::to_string(workers[k]) +
                  " workers exited nonzero");
    }
    outputs[k] = slurp(csv);
  }
  std::filesystem::remove_all(dir);
  if (outputs[0].empty()) return fail("batch produced no output");
  if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
    return fail("outputs differ across worker counts");
  }
  return pass("50 pairs, workers {1, 4, 8} byte-identical");
}

// 8. Calibration on a labeled set shifts weight toward the statistical
// measure as the assorted factor grows.
Outcome calibration_shape() {
  const std::string dir = support::fresh_temp_dir("accept_calib");
  srif::synth::SynthOptions opt;
  opt.width = 96;
  opt.height = 96;
  const srif::RunConfig cfg;
  const std::string manifest_path =
      srif::synth::generate_labeled_dataset(opt, cfg, dir, nullptr);

  const srif::Manifest manifest = srif::parse_manifest(manifest_path);
  if (manifest.entries.size() < 200) {
    return fail("labeled set has only " +
                std::to_string(manifest.entries.size()) + " pairs");
  }
  const auto rows = srif::score_manifest(manifest, cfg, nullptr, 1);
  std::vector<srif::CalibrationSample> samples;
  for (const srif::BatchRow& row : rows) {
    if (!row.ok) return fail("scoring failed on " + row.entry.test_path);
    if (row.entry.split == "test") continue;
    samples.push_back(
        {row.report.d, row.report.s_sim, row.report.f, row.entry.mos});
  }
  const srif::CalibrationTable table =
      srif::calibrate(samples, cfg.bins, cfg.min_bin_count, cfg.alpha,
                      cfg.sf.gamma, "acceptance", "0");
  std::filesystem::remove_all(dir);

  if (table.bins.size() < 4) {
    return fail("only " + std::to_string(table.bins.size()) +
                " bins survived merging");
  }
  std::vector<double> centers, w_s;
  for (const srif::CalibrationBin& b : table.bins) {
    centers.push_back(0.5 * (b.lo + b.hi));
    w_s.push_back(b.w_s);
  }
  const double rho = srif::srcc(centers, w_s);
  if (!(rho > 0.0)) {
    return fail("srcc(f centers, w_s) = " + fmt(rho) + " is not positive");
  }
  return pass(std::to_string(samples.size()) + " training pairs, " +
              std::to_string(table.bins.size()) + " bins, srcc(f, w_s) = " +
              fmt(rho));
}

// 9. Optional full-dataset correlation check against user-supplied QADS.
Outcome qads_correlation() {
  const char* manifest_env = std::getenv("SRIF_QADS_MANIFEST");
  if (manifest_env == nullptr) {
    return skip(
        "QADS images and MOS are not redistributable; set "
        "SRIF_QADS_MANIFEST to a local manifest to enable");
  }
  const srif::RunConfig cfg;
  std::optional<srif::CalibrationTable> table;
  if (const char* table_env = std::getenv("SRIF_TABLE")) {
    table = srif::load_table(table_env);
  }
  const srif::Manifest manifest = srif::parse_manifest(manifest_env);
  const auto rows = srif::score_manifest(manifest, cfg,
                                         table ? &*table : nullptr, 1);

  std::vector<double> q, d, s, mos;
  for (const srif::BatchRow& row : rows) {
    if (!row.ok) continue;
    q.push_back(row.report.q_ds);
    d.push_back(row.report.d);
    s.push_back(row.report.s_sim);
    mos.push_back(row.entry.mos);
  }
  if (q.size() < 100) {
    return fail("only " + std::to_string(q.size()) + " usable rows");
  }
  const double srcc_q = std::abs(srif::srcc(q, mos));
  const double srcc_d = std::abs(srif::srcc(d, mos));
  const double srcc_s = std::abs(srif::srcc(s, mos));
  if (srcc_q < 0.88) return fail("srif SRCC = " + fmt(srcc_q) + " < 0.88");
  if (srcc_d >= srcc_q || srcc_s >= srcc_q) {
    return fail("component SRCC (" + fmt(srcc_d) + ", " + fmt(srcc_s) +
                ") does not trail the blended " + fmt(srcc_q));
  }
  return pass("srif " + fmt(srcc_q) + " > df " + fmt(srcc_d) + ", sf " +
              fmt(srcc_s) + (table ? " (with table)" : " (fallback weights)"));
}

// 10. Throughput: a full-size pair scores quickly; batch scales with cores.
Outcome throughput() {
  const srif::ImagePlane ref = support::textured(512, 512, 9901);
  const srif::ImagePlane test = support::blurred(ref, 1.5);
  const srif::RunConfig cfg;
  srif::score_pair(ref, test, cfg, nullptr);  // warm the filter-bank cache
  const auto t0 = std::chrono::steady_clock::now();
  srif::score_pair(ref, test, cfg, nullptr);
  const double single = seconds_since(t0);
  if (!(single < 2.0)) {
    return fail("512x512 pair took " + fmt(single) + " s (limit 2)");
  }

  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 4) {
    return pass("512x512 pair in " + fmt(single) +
                " s; speedup check skipped: hardware_concurrency() = " +
                std::to_string(cores) + " < 4, no parallel headroom to measure");
  }

  const std::string dir = support::fresh_temp_dir("accept_speed");
  std::ostringstream manifest;
  manifest << "ref_path,test_path,mos,algorithm,scale,split\n";
  for (int i = 0; i < 100; ++i) {
    const srif::ImagePlane r =
        support::textured(64, 64, 9950 + static_cast<std::uint64_t>(i));
    srif::save_gray_bmp(r, dir + "/r" + std::to_string(i) + ".bmp");
    srif::save_gray_bmp(support::blurred(r, 1.0),
                        dir + "/t" + std::to_string(i) + ".bmp");
    manifest << "r" << i << ".bmp,t" << i << ".bmp,50,alg,4,train\n";
  }
  const std::string manifest_path = dir + "/manifest.csv";
  {
    std::ofstream out(manifest_path);
    out << manifest.str();
  }
  const srif::Manifest m = srif::parse_manifest(manifest_path);
  const auto t1 = std::chrono::steady_clock::now();
  srif::score_manifest(m, cfg, nullptr, 1);
  const double serial = seconds_since(t1);
  const auto t4 = std::chrono::steady_clock::now();
  srif::score_manifest(m, cfg, nullptr, 4);
  const double parallel = seconds_since(t4);
  std::filesystem::remove_all(dir);

  const double speedup = serial / parallel;
  if (speedup < 3.0) {
    return fail("4-worker speedup = " + fmt(speedup) + "x (need 3x)");
  }
  return pass("512x512 pair in " + fmt(single) + " s; 4-worker speedup " +
              fmt(speedup) + "x");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"identity suite", identity_suite},
      {"pyramid reconstruction", pyramid_reconstruction},
      {"oracle equivalence", oracle_equivalence},
      {"blur monotonicity", blur_monotonicity},
      {"weighting algebra", weighting_algebra},
      {"logistic-fit recovery", logistic_recovery},
      {"batch determinism", batch_determinism},
      {"calibration shape", calibration_shape},
      {"qads correlation (optional)", qads_correlation},
      {"throughput sanity", throughput},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = fail(std::string("unexpected exception: ") + e.what());
    }
    const char* tag = out.kind == Outcome::kPass   ? "[PASS]"
                      : out.kind == Outcome::kSkip ? "[SKIP]"
                                                   : "[FAIL]";
    if (out.kind == Outcome::kFail) ++failures;
    std::cout << tag << " " << index << ". " << c.name << ": " << out.detail
              << "\n";
  }
  if (failures > 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria satisfied (skips noted above)\n";
  return 0;
}
