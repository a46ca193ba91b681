#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "srif/dataset.hpp"
#include "srif/deterministic_fidelity.hpp"
#include "srif/image.hpp"
#include "srif/lpc.hpp"
#include "srif/statistical_fidelity.hpp"
#include "srif/uncertainty.hpp"

namespace srif {

struct RunConfig {
  int pyramid_depth = 4;
  DfConfig df;
  SfConfig sf;
  LpcConfig lpc;
  double alpha = 1.0;  // exponent inside the assorted factor
  int bins = 8;
  std::size_t min_bin_count = 20;
  int workers = 1;  // excluded from the canonical form: no numeric effect

  void validate() const;
};

// Sorted key = value lines covering every numeric setting.
std::string canonical_config_text(const RunConfig& cfg);

// FNV-1a over the canonical form plus the calibration table contents (or the
// literal "none"), as 16 hex digits. Identical hashes mean identical numeric
// settings.
std::string config_hash_hex(const RunConfig& cfg, const CalibrationTable* table);

// Applies one key = value assignment; unknown keys raise ConfigError.
void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value);

// key = value file, '#' comments. Later lines win.
void load_config_file(RunConfig& cfg, const std::string& path);

struct FidelityReport {
  double d = 0.0;
  double s_raw = 0.0;
  double s_sim = 0.0;
  double sr = 0.0;
  double tr = 0.0;
  double f = 0.0;
  double w_d = 0.5;
  double w_s = 0.5;
  double q_ds = 0.0;
  bool fallback_weights = false;  // no table: fixed equal weights were used
};

FidelityReport score_pair(const ImagePlane& ref, const ImagePlane& test,
                          const RunConfig& cfg, const CalibrationTable* table);

struct BatchRow {
  ManifestEntry entry;
  bool ok = false;
  FidelityReport report;
  std::string error_kind;
  std::string error_message;
};

// Scores every manifest entry. Rows are indexed like the manifest regardless
// of worker count; failures are recorded per row, never fatal.
std::vector<BatchRow> score_manifest(const Manifest& manifest, const RunConfig& cfg,
                                     const CalibrationTable* table, int workers);

}  // namespace srif
