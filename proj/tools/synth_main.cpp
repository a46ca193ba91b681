#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "srif/errors.hpp"
#include "srif/synth.hpp"

// Generates a labeled synthetic benchmark: textured references, four
// distortion families at graded severities, and planted opinion scores with
// a known relationship to both fidelity measures. Useful for smoke tests and
// for producing the default calibration table without any dataset downloads.
int main(int argc, char** argv) {
  CLI::App app{"synthetic labeled benchmark generator"};

  srif::synth::SynthOptions opt;
  std::string out_dir;
  std::string config_path;
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--contents", opt.contents, "number of reference images");
  app.add_option("--severities", opt.severities, "severity steps per distortion");
  app.add_option("--width", opt.width, "image width");
  app.add_option("--height", opt.height, "image height");
  app.add_option("--seed", opt.seed, "generator seed");
  app.add_option("--mos-noise", opt.mos_noise, "opinion noise sigma");
  app.add_option("--config", config_path, "key = value config file");

  CLI11_PARSE(app, argc, argv);

  try {
    srif::RunConfig cfg;
    if (!config_path.empty()) srif::load_config_file(cfg, config_path);
    const std::string manifest =
        srif::synth::generate_labeled_dataset(opt, cfg, out_dir, &std::cerr);
    std::cout << manifest << "\n";
    return 0;
  } catch (const srif::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
}
