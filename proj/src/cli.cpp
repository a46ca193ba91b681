#include "srif/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "srif/dataset.hpp"
#include "srif/errors.hpp"
#include "srif/eval.hpp"
#include "srif/uncertainty.hpp"
#include "text.hpp"

namespace srif::cli {

namespace {

using detail::format_fixed6;
using detail::format_g17;

std::optional<CalibrationTable> load_optional_table(const Options& opt) {
  if (opt.table_path.empty()) return std::nullopt;
  return load_table(opt.table_path);
}

void warn_fallback(std::ostream& err) {
  err << "warning: no calibration table given; scoring with fixed weights "
         "w_d = w_s = 0.5 (pass --table or set SRIF_TABLE)\n";
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: InternalError: " << e.what() << "\n";
    return 6;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ParseError("short write on '" + path + "'");
}

struct ScoredManifest {
  Manifest manifest;
  std::vector<BatchRow> rows;
  std::size_t failures = 0;
};

ScoredManifest score_all(const std::string& manifest_path, const Options& opt,
                         const CalibrationTable* table, std::ostream& err) {
  ScoredManifest sm;
  sm.manifest = parse_manifest(manifest_path);
  for (const std::string& w : sm.manifest.warnings) {
    err << "warning: " << w << "\n";
  }
  sm.rows = score_manifest(sm.manifest, opt.cfg, table, opt.cfg.workers);
  for (const BatchRow& row : sm.rows) {
    if (!row.ok) {
      ++sm.failures;
      err << "warning: skipped " << row.entry.test_path << ": "
          << row.error_message << "\n";
    }
  }
  return sm;
}

const char* kBatchColumns =
    "ref_path,test_path,mos,algorithm,scale,split,status,error,"
    "D,S_raw,S_sim,sr,tr,f,w_d,w_s,Q_ds";

std::string batch_csv(const ScoredManifest& sm, const std::string& hash) {
  std::string out;
  out += "# srif batch v1\n";
  out += "# config = " + hash + "\n";
  out += kBatchColumns;
  out += "\n";
  for (const BatchRow& row : sm.rows) {
    const ManifestEntry& e = row.entry;
    out += e.ref_path + "," + e.test_path + "," + format_g17(e.mos) + "," +
           e.algorithm + "," + std::to_string(e.scale_factor) + "," + e.split;
    if (row.ok) {
      const FidelityReport& r = row.report;
      out += ",ok,,";
      out += format_g17(r.d) + "," + format_g17(r.s_raw) + "," +
             format_g17(r.s_sim) + "," + format_g17(r.sr) + "," +
             format_g17(r.tr) + "," + format_g17(r.f) + "," +
             format_g17(r.w_d) + "," + format_g17(r.w_s) + "," +
             format_g17(r.q_ds);
    } else {
      out += ",error," + row.error_kind + ",,,,,,,,,";
    }
    out += "\n";
  }
  return out;
}

// Fixed qualitative palette for the scatter plot.
const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb", "#222255",
                          "#999933", "#882255"};

std::string scatter_svg(const ScoredManifest& sm, const std::string& hash) {
  const double px0 = 60, px1 = 470, py0 = 430, py1 = 20;
  auto sx = [&](double v) {
    return px0 + std::clamp(v, 0.0, 1.0) * (px1 - px0);
  };
  auto sy = [&](double v) {
    return py0 + std::clamp(v, 0.0, 1.0) * (py1 - py0);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::vector<std::string> algorithms;
  for (const BatchRow& row : sm.rows) {
    if (!row.ok) continue;
    if (std::find(algorithms.begin(), algorithms.end(), row.entry.algorithm) ==
        algorithms.end()) {
      algorithms.push_back(row.entry.algorithm);
    }
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<!-- config = " + hash + " -->\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    svg += "<line x1=\"" + num(sx(v)) + "\" y1=\"" + num(py0) + "\" x2=\"" +
           num(sx(v)) + "\" y2=\"" + num(py1) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(px0) + "\" y1=\"" + num(sy(v)) + "\" x2=\"" +
           num(px1) + "\" y2=\"" + num(sy(v)) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(sx(v)) + "\" y=\"" + num(py0 + 18) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           num(v) + "</text>\n";
    svg += "<text x=\"" + num(px0 - 8) + "\" y=\"" + num(sy(v) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
           num(v) + "</text>\n";
  }
  svg += "<rect x=\"" + num(px0) + "\" y=\"" + num(py1) + "\" width=\"" +
         num(px1 - px0) + "\" height=\"" + num(py0 - py1) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
  svg += "<text x=\"" + num((px0 + px1) / 2) + "\" y=\"466\" "
         "font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
         "deterministic fidelity D</text>\n";
  svg += "<text x=\"16\" y=\"" + num((py0 + py1) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " + num((py0 + py1) / 2) + ")\">"
         "statistical similarity S</text>\n";

  for (const BatchRow& row : sm.rows) {
    if (!row.ok) continue;
    const std::size_t idx = static_cast<std::size_t>(
        std::find(algorithms.begin(), algorithms.end(), row.entry.algorithm) -
        algorithms.begin());
    svg += "<circle cx=\"" + num(sx(row.report.d)) + "\" cy=\"" +
           num(sy(row.report.s_sim)) + "\" r=\"3\" fill=\"" +
           kPalette[idx % 10] + "\" fill-opacity=\"0.7\"/>\n";
  }

  double ly = 40;
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    svg += "<rect x=\"488\" y=\"" + num(ly - 9) +
           "\" width=\"12\" height=\"12\" fill=\"" + kPalette[i % 10] + "\"/>\n";
    svg += "<text x=\"506\" y=\"" + num(ly + 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           (algorithms[i].empty() ? "(unnamed)" : algorithms[i]) + "</text>\n";
    ly += 20;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

int cmd_score(const std::string& ref_path, const std::string& test_path,
              const Options& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    const auto table = load_optional_table(opt);
    if (!table.has_value()) warn_fallback(err);
    const ImagePlane ref = load_luminance(ref_path);
    const ImagePlane test = load_luminance(test_path);
    if (ref.width() != test.width() || ref.height() != test.height()) {
      throw DimensionMismatch("images differ in size: " + ref_path + " vs " +
                              test_path);
    }
    const CalibrationTable* tp = table.has_value() ? &*table : nullptr;
    const FidelityReport r = score_pair(ref, test, opt.cfg, tp);

    out << "# srif score v1\n";
    out << "config = " << config_hash_hex(opt.cfg, tp) << "\n";
    out << "D = " << format_fixed6(r.d) << "\n";
    out << "S_raw = " << format_fixed6(r.s_raw) << "\n";
    out << "S_sim = " << format_fixed6(r.s_sim) << "\n";
    out << "sr = " << format_fixed6(r.sr) << "\n";
    out << "tr = " << format_fixed6(r.tr) << "\n";
    out << "f = " << format_fixed6(r.f) << "\n";
    out << "w_d = " << format_fixed6(r.w_d) << "\n";
    out << "w_s = " << format_fixed6(r.w_s) << "\n";
    out << "Q_ds = " << format_fixed6(r.q_ds) << "\n";
    return 0;
  });
}

int cmd_batch(const std::string& manifest_path, const Options& opt,
              const std::string& out_path, std::ostream& err) {
  return run_guarded(err, [&]() {
    const auto table = load_optional_table(opt);
    if (!table.has_value()) warn_fallback(err);
    const CalibrationTable* tp = table.has_value() ? &*table : nullptr;
    const ScoredManifest sm = score_all(manifest_path, opt, tp, err);
    write_file(out_path, batch_csv(sm, config_hash_hex(opt.cfg, tp)));
    return 0;
  });
}

int cmd_calibrate(const std::string& manifest_path, const Options& opt,
                  const std::string& out_table, std::ostream& err) {
  return run_guarded(err, [&]() {
    // Calibration derives the table, so scoring runs without one.
    const ScoredManifest sm = score_all(manifest_path, opt, nullptr, err);

    std::vector<CalibrationSample> samples;
    for (const BatchRow& row : sm.rows) {
      if (!row.ok) continue;
      if (row.entry.split == "test") continue;  // hold out the test split
      samples.push_back(
          {row.report.d, row.report.s_sim, row.report.f, row.entry.mos});
    }
    const std::string hash = config_hash_hex(opt.cfg, nullptr);
    CalibrationTable table =
        calibrate(samples, opt.cfg.bins, opt.cfg.min_bin_count, opt.cfg.alpha,
                  opt.cfg.sf.gamma, manifest_path, hash);
    save_table(table, out_table);

    std::string curve;
    curve += "# srif calibration curve v1\n";
    curve += "# config = " + hash + "\n";
    curve += "f_lo,f_hi,f_center,v_d,v_s,w_d,w_s,count\n";
    for (const CalibrationBin& b : table.bins) {
      curve += format_g17(b.lo) + "," + format_g17(b.hi) + "," +
               format_g17(0.5 * (b.lo + b.hi)) + "," + format_g17(b.v_d) + "," +
               format_g17(b.v_s) + "," + format_g17(b.w_d) + "," +
               format_g17(b.w_s) + "," + std::to_string(b.count) + "\n";
    }
    write_file(out_table + ".curve.csv", curve);

    for (const CalibrationBin& b : table.bins) {
      if (b.degenerate) {
        err << "warning: degenerate calibration bin [" << format_g17(b.lo)
            << ", " << format_g17(b.hi) << "): fell back to equal weights\n";
      }
    }
    err << "calibrated " << table.bins.size() << " bins from " << samples.size()
        << " pairs\n";
    return 0;
  });
}

int cmd_evaluate(const std::string& manifest_path, const Options& opt,
                 const std::string& mode, const std::string& split,
                 const std::string& out_csv, std::ostream& out,
                 std::ostream& err) {
  return run_guarded(err, [&]() {
    if (mode != "srif" && mode != "df_only" && mode != "sf_only" && mode != "avg") {
      throw ConfigError("unknown evaluate mode '" + mode + "'");
    }
    const bool needs_weights = mode == "srif";
    const auto table = load_optional_table(opt);
    if (needs_weights && !table.has_value()) warn_fallback(err);
    const CalibrationTable* tp = table.has_value() ? &*table : nullptr;

    const ScoredManifest sm = score_all(manifest_path, opt, tp, err);
    std::vector<double> scores, mos;
    for (const BatchRow& row : sm.rows) {
      if (!row.ok) continue;
      if (split != "all" && row.entry.split != split) continue;
      const FidelityReport& r = row.report;
      double s = 0.0;
      if (mode == "srif") {
        s = r.q_ds;
      } else if (mode == "df_only") {
        s = r.d;
      } else if (mode == "sf_only") {
        s = r.s_sim;
      } else {
        s = 0.5 * (r.d + r.s_sim);
      }
      scores.push_back(s);
      mos.push_back(row.entry.mos);
    }

    const EvaluationReport rep = evaluate_scores(scores, mos);
    const std::string hash = config_hash_hex(opt.cfg, tp);

    out << "# srif evaluate v1\n";
    out << "config = " << hash << "\n";
    out << "mode = " << mode << "\n";
    out << "split = " << split << "\n";
    out << "n = " << rep.n << "\n";
    out << "excluded = " << sm.failures << "\n";
    out << "srcc = " << format_fixed6(rep.srcc) << "\n";
    out << "krcc = " << format_fixed6(rep.krcc) << "\n";
    out << "plcc = " << format_fixed6(rep.plcc) << "\n";
    out << "rmse = " << format_fixed6(rep.rmse) << "\n";

    if (!out_csv.empty()) {
      std::string csv;
      csv += "# srif evaluate v1\n";
      csv += "# config = " + hash + "\n";
      csv += "mode,split,n,excluded,srcc,krcc,plcc,rmse,beta1,beta2,beta3,beta4,beta5\n";
      csv += mode + "," + split + "," + std::to_string(rep.n) + "," +
             std::to_string(sm.failures) + "," + format_g17(rep.srcc) + "," +
             format_g17(rep.krcc) + "," + format_g17(rep.plcc) + "," +
             format_g17(rep.rmse) + "," + format_g17(rep.params.beta1) + "," +
             format_g17(rep.params.beta2) + "," + format_g17(rep.params.beta3) +
             "," + format_g17(rep.params.beta4) + "," +
             format_g17(rep.params.beta5) + "\n";
      write_file(out_csv, csv);
    }
    return 0;
  });
}

int cmd_plot2d(const std::string& manifest_path, const Options& opt,
               const std::string& out_csv, const std::string& out_svg,
               std::ostream& err) {
  return run_guarded(err, [&]() {
    // The scatter uses only the two fidelities; weights are not involved.
    const ScoredManifest sm = score_all(manifest_path, opt, nullptr, err);
    const std::string hash = config_hash_hex(opt.cfg, nullptr);

    std::string csv;
    csv += "# srif plot-2d v1\n";
    csv += "# config = " + hash + "\n";
    csv += "D,S_sim,algorithm,scale\n";
    for (const BatchRow& row : sm.rows) {
      if (!row.ok) continue;
      csv += format_g17(row.report.d) + "," + format_g17(row.report.s_sim) +
             "," + row.entry.algorithm + "," +
             std::to_string(row.entry.scale_factor) + "\n";
    }
    write_file(out_csv, csv);

    if (!out_svg.empty()) {
      write_file(out_svg, scatter_svg(sm, hash));
    }
    return 0;
  });
}

}  // namespace srif::cli
