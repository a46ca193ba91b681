#include "srif/scoring.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <thread>

#include "srif/errors.hpp"
#include "srif/pyramid.hpp"
#include "text.hpp"

namespace srif {

namespace {

std::string join_g17(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += detail::format_g17(v[i]);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view value) {
  std::vector<double> out;
  for (std::string_view part : detail::split(value, ',')) {
    const std::string s{detail::trim(part)};
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError("bad number in list: '" + s + "'");
    }
    out.push_back(v);
  }
  return out;
}

double parse_one_double(std::string_view value) {
  const std::string s{detail::trim(value)};
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad number: '" + s + "'");
  }
  return v;
}

int parse_one_int(std::string_view value) {
  const std::string s{detail::trim(value)};
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad integer: '" + s + "'");
  }
  return v;
}

}  // namespace

void RunConfig::validate() const {
  if (pyramid_depth < 2) throw WeightNormalization("pyramid.depth must be at least 2");
  df.validate();
  sf.validate();
  lpc.validate();
  if (bins < 1) throw WeightNormalization("uncertainty.bins must be positive");
  if (min_bin_count < 2) {
    throw WeightNormalization("uncertainty.min_bin_count must be at least 2");
  }
  if (workers < 1) throw WeightNormalization("workers must be positive");
  const std::size_t fidelity_levels =
      df.level_weights.size() > sf.level_weights.size() ? df.level_weights.size()
                                                        : sf.level_weights.size();
  if (static_cast<std::size_t>(pyramid_depth) < fidelity_levels + 1) {
    throw WeightNormalization("pyramid.depth too shallow for the level weights");
  }
}

std::string canonical_config_text(const RunConfig& cfg) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  };
  // Keys in sorted order; workers deliberately absent.
  kv("df.c1", detail::format_g17(cfg.df.c1));
  kv("df.cw", detail::format_g17(cfg.df.cw));
  kv("df.level_weights", join_g17(cfg.df.level_weights));
  kv("df.pooled_floor", detail::format_g17(cfg.df.pooled_floor));
  kv("df.scale_exponents", join_g17(cfg.df.scale_exponents));
  kv("df.window", std::to_string(cfg.df.window));
  kv("df.window_sigma", detail::format_g17(cfg.df.window_sigma));
  kv("lpc.c_stab", detail::format_g17(cfg.lpc.c_stab));
  kv("lpc.orientations", std::to_string(cfg.lpc.orientations));
  kv("lpc.pool_fraction", detail::format_g17(cfg.lpc.pool_fraction));
  kv("lpc.rank_decay", detail::format_g17(cfg.lpc.rank_decay));
  kv("lpc.scales", std::to_string(cfg.lpc.scales));
  kv("lpc.sigma_on_f", detail::format_g17(cfg.lpc.sigma_on_f));
  kv("lpc.theta_sigma_ratio", detail::format_g17(cfg.lpc.theta_sigma_ratio));
  kv("lpc.wavelength0", detail::format_g17(cfg.lpc.wavelength0));
  kv("pyramid.depth", std::to_string(cfg.pyramid_depth));
  kv("sf.bins", std::to_string(cfg.sf.bins));
  kv("sf.c", detail::format_g17(cfg.sf.c));
  kv("sf.eps", detail::format_g17(cfg.sf.eps));
  kv("sf.gamma", detail::format_g17(cfg.sf.gamma));
  kv("sf.level_weights", join_g17(cfg.sf.level_weights));
  kv("sf.norm_window", std::to_string(cfg.sf.norm_window));
  kv("sf.range", detail::format_g17(cfg.sf.range));
  kv("uncertainty.alpha", detail::format_g17(cfg.alpha));
  kv("uncertainty.bins", std::to_string(cfg.bins));
  kv("uncertainty.min_bin_count", std::to_string(cfg.min_bin_count));
  return out;
}

std::string config_hash_hex(const RunConfig& cfg, const CalibrationTable* table) {
  std::string text = canonical_config_text(cfg);
  text += "[table]\n";
  text += table != nullptr ? serialize_table(*table) : std::string("none");
  return detail::hex16(detail::fnv1a64(text));
}

void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value) {
  const std::string k{detail::trim(key)};
  if (k == "pyramid.depth") {
    cfg.pyramid_depth = parse_one_int(value);
  } else if (k == "df.window") {
    cfg.df.window = parse_one_int(value);
  } else if (k == "df.window_sigma") {
    cfg.df.window_sigma = parse_one_double(value);
  } else if (k == "df.c1") {
    cfg.df.c1 = parse_one_double(value);
  } else if (k == "df.cw") {
    cfg.df.cw = parse_one_double(value);
  } else if (k == "df.pooled_floor") {
    cfg.df.pooled_floor = parse_one_double(value);
  } else if (k == "df.scale_exponents") {
    cfg.df.scale_exponents = parse_double_list(value);
  } else if (k == "df.level_weights") {
    cfg.df.level_weights = parse_double_list(value);
  } else if (k == "sf.norm_window") {
    cfg.sf.norm_window = parse_one_int(value);
  } else if (k == "sf.c") {
    cfg.sf.c = parse_one_double(value);
  } else if (k == "sf.bins") {
    cfg.sf.bins = parse_one_int(value);
  } else if (k == "sf.range") {
    cfg.sf.range = parse_one_double(value);
  } else if (k == "sf.eps") {
    cfg.sf.eps = parse_one_double(value);
  } else if (k == "sf.gamma") {
    cfg.sf.gamma = parse_one_double(value);
  } else if (k == "sf.level_weights") {
    cfg.sf.level_weights = parse_double_list(value);
  } else if (k == "lpc.orientations") {
    cfg.lpc.orientations = parse_one_int(value);
  } else if (k == "lpc.scales") {
    cfg.lpc.scales = parse_one_int(value);
  } else if (k == "lpc.wavelength0") {
    cfg.lpc.wavelength0 = parse_one_double(value);
  } else if (k == "lpc.sigma_on_f") {
    cfg.lpc.sigma_on_f = parse_one_double(value);
  } else if (k == "lpc.theta_sigma_ratio") {
    cfg.lpc.theta_sigma_ratio = parse_one_double(value);
  } else if (k == "lpc.c_stab") {
    cfg.lpc.c_stab = parse_one_double(value);
  } else if (k == "lpc.rank_decay") {
    cfg.lpc.rank_decay = parse_one_double(value);
  } else if (k == "lpc.pool_fraction") {
    cfg.lpc.pool_fraction = parse_one_double(value);
  } else if (k == "uncertainty.alpha") {
    cfg.alpha = parse_one_double(value);
  } else if (k == "uncertainty.bins") {
    cfg.bins = parse_one_int(value);
  } else if (k == "uncertainty.min_bin_count") {
    const int v = parse_one_int(value);
    if (v < 0) throw ConfigError("uncertainty.min_bin_count must be nonnegative");
    cfg.min_bin_count = static_cast<std::size_t>(v);
  } else if (k == "workers") {
    cfg.workers = parse_one_int(value);
  } else {
    throw ConfigError("unknown config key '" + k + "'");
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    try {
      apply_config_entry(cfg, t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

FidelityReport score_pair(const ImagePlane& ref, const ImagePlane& test,
                          const RunConfig& cfg, const CalibrationTable* table) {
  cfg.validate();
  const PyramidPair pair = decompose_pair(ref, test, cfg.pyramid_depth);

  FidelityReport rep;
  rep.d = df_total(pair, cfg.df);
  const SfResult sf = sf_total(pair, cfg.sf);
  rep.s_raw = sf.raw;
  rep.s_sim = sf.sim;
  const AssortedFeatures af = assorted_features(pair, cfg.lpc, cfg.sf, cfg.alpha);
  rep.sr = af.sr;
  rep.tr = af.tr;
  rep.f = af.f;
  if (table != nullptr) {
    const auto [w_d, w_s] = lookup_weights(*table, rep.f);
    rep.w_d = w_d;
    rep.w_s = w_s;
  } else {
    rep.fallback_weights = true;
  }
  rep.q_ds = srif_index(rep.d, rep.s_sim, rep.w_d, rep.w_s);
  return rep;
}

std::vector<BatchRow> score_manifest(const Manifest& manifest, const RunConfig& cfg,
                                     const CalibrationTable* table, int workers) {
  const std::size_t n = manifest.entries.size();
  std::vector<BatchRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i].entry = manifest.entries[i];

  auto score_one = [&](std::size_t i) {
    BatchRow& row = rows[i];
    try {
      const LoadedPair pair = load_pair(row.entry);
      row.report = score_pair(pair.reference, pair.test, cfg, table);
      row.ok = true;
    } catch (const Error& e) {
      row.error_kind = e.kind();
      row.error_message = e.what();
    } catch (const std::exception& e) {
      row.error_kind = "InternalError";
      row.error_message = e.what();
    }
  };

  const int thread_count =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(
                           workers < 1 ? 1 : workers), n == 0 ? 1 : n));
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < n; ++i) score_one(i);
    return rows;
  }

  // Row i is written only by the thread that claimed i: results are
  // positionally identical for any worker count.
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        score_one(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return rows;
}

}  // namespace srif
