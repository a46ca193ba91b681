#pragma once

#include <iosfwd>
#include <string>

#include "srif/scoring.hpp"

namespace srif::cli {

struct Options {
  RunConfig cfg;
  std::string table_path;  // empty means score with fixed fallback weights
};

// Each command returns the process exit code and reports failures on err.
// Human-facing numbers carry 6 decimals; tabular output keeps full precision.

int cmd_score(const std::string& ref_path, const std::string& test_path,
              const Options& opt, std::ostream& out, std::ostream& err);

int cmd_batch(const std::string& manifest_path, const Options& opt,
              const std::string& out_path, std::ostream& err);

int cmd_calibrate(const std::string& manifest_path, const Options& opt,
                  const std::string& out_table, std::ostream& err);

// mode: srif, df_only, sf_only, or avg. split: train, test, or all rows.
int cmd_evaluate(const std::string& manifest_path, const Options& opt,
                 const std::string& mode, const std::string& split,
                 const std::string& out_csv, std::ostream& out, std::ostream& err);

int cmd_plot2d(const std::string& manifest_path, const Options& opt,
               const std::string& out_csv, const std::string& out_svg,
               std::ostream& err);

}  // namespace srif::cli
