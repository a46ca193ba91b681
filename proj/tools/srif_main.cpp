#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "srif/cli.hpp"
#include "srif/errors.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string table_path;
  int workers = 0;
  double alpha = -1.0;
  double gamma = -1.0;
  int bins = 0;

  void attach(CLI::App* app, bool with_table = true) {
    app->add_option("--config", config_path, "key = value config file");
    if (with_table) {
      app->add_option("--table", table_path,
                      "calibration table (default: $SRIF_TABLE)");
    }
    app->add_option("--workers", workers, "parallel scoring threads");
    app->add_option("--alpha", alpha, "assorted-factor exponent");
    app->add_option("--gamma", gamma, "statistical similarity rate");
    app->add_option("--bins", bins, "calibration bin count");
  }

  // Flags override the config file, which overrides the defaults.
  srif::cli::Options resolve(bool wants_table) const {
    srif::cli::Options opt;
    if (!config_path.empty()) {
      srif::load_config_file(opt.cfg, config_path);
    }
    if (workers > 0) opt.cfg.workers = workers;
    if (alpha >= 0.0) opt.cfg.alpha = alpha;
    if (gamma > 0.0) opt.cfg.sf.gamma = gamma;
    if (bins > 0) opt.cfg.bins = bins;
    if (wants_table) {
      opt.table_path = table_path;
      if (opt.table_path.empty()) {
        if (const char* env = std::getenv("SRIF_TABLE")) opt.table_path = env;
      }
    }
    return opt;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SRIF: full-reference quality assessment for super-resolved images"};
  app.require_subcommand(1);

  // score
  auto* score = app.add_subcommand("score", "score one reference/test pair");
  std::string score_ref, score_test;
  score->add_option("reference", score_ref, "reference image")->required();
  score->add_option("test", score_test, "super-resolved image")->required();
  CommonFlags score_flags;
  score_flags.attach(score);

  // batch
  auto* batch = app.add_subcommand("batch", "score every pair in a manifest");
  std::string batch_manifest, batch_out;
  batch->add_option("manifest", batch_manifest, "manifest CSV")->required();
  batch->add_option("--out", batch_out, "output CSV")->required();
  CommonFlags batch_flags;
  batch_flags.attach(batch);

  // calibrate
  auto* calib = app.add_subcommand("calibrate",
                                   "fit a weighting table from labeled pairs");
  std::string calib_manifest, calib_out;
  calib->add_option("manifest", calib_manifest, "labeled manifest CSV")->required();
  calib->add_option("--out", calib_out, "output table path")->required();
  CommonFlags calib_flags;
  calib_flags.attach(calib, /*with_table=*/false);

  // evaluate
  auto* eval = app.add_subcommand("evaluate",
                                  "correlate scores against opinion scores");
  std::string eval_manifest, eval_mode = "srif", eval_split = "all", eval_out;
  eval->add_option("manifest", eval_manifest, "labeled manifest CSV")->required();
  eval->add_option("--mode", eval_mode, "srif | df_only | sf_only | avg");
  eval->add_option("--split", eval_split, "train | test | all");
  eval->add_option("--out", eval_out, "also write a CSV report here");
  CommonFlags eval_flags;
  eval_flags.attach(eval);

  // plot-2d
  auto* plot = app.add_subcommand("plot-2d",
                                  "emit the (D, S) scatter for a manifest");
  std::string plot_manifest, plot_out, plot_svg;
  plot->add_option("manifest", plot_manifest, "manifest CSV")->required();
  plot->add_option("--out", plot_out, "output CSV")->required();
  plot->add_option("--svg", plot_svg, "also render an SVG scatter");
  CommonFlags plot_flags;
  plot_flags.attach(plot, /*with_table=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      return srif::cli::cmd_score(score_ref, score_test,
                                  score_flags.resolve(true), std::cout,
                                  std::cerr);
    }
    if (batch->parsed()) {
      return srif::cli::cmd_batch(batch_manifest, batch_flags.resolve(true),
                                  batch_out, std::cerr);
    }
    if (calib->parsed()) {
      return srif::cli::cmd_calibrate(calib_manifest, calib_flags.resolve(false),
                                      calib_out, std::cerr);
    }
    if (eval->parsed()) {
      return srif::cli::cmd_evaluate(eval_manifest, eval_flags.resolve(true),
                                     eval_mode, eval_split, eval_out, std::cout,
                                     std::cerr);
    }
    if (plot->parsed()) {
      return srif::cli::cmd_plot2d(plot_manifest, plot_flags.resolve(false),
                                   plot_out, plot_svg, std::cerr);
    }
  } catch (const srif::Error& e) {
    // Config resolution happens before the command body runs.
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
