#include "srif/dataset.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "srif/errors.hpp"
#include "text.hpp"

namespace srif {

namespace {

constexpr const char* kHeader = "ref_path,test_path,mos,algorithm,scale,split";

double parse_double_field(std::string_view field, std::size_t lineno,
                          const char* what) {
  const std::string s{detail::trim(field)};
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("manifest line " + std::to_string(lineno) + ": " + what +
                     " is not a number: '" + s + "'");
  }
  return value;
}

std::string resolve(const std::filesystem::path& base, std::string_view p) {
  const std::filesystem::path path{std::string(p)};
  if (path.is_absolute()) return path.string();
  return (base / path).lexically_normal().string();
}

}  // namespace

Manifest parse_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open manifest '" + path + "'");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  Manifest m;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;

    if (!header_seen) {
      if (t != kHeader) {
        throw ParseError("manifest line " + std::to_string(lineno) +
                         ": expected header '" + kHeader + "'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = detail::split(t, ',');
    if (fields.size() != 6) {
      throw ParseError("manifest line " + std::to_string(lineno) + ": expected 6 fields, got " +
                       std::to_string(fields.size()));
    }

    ManifestEntry e;
    const std::string_view ref = detail::trim(fields[0]);
    const std::string_view test = detail::trim(fields[1]);
    if (ref.empty() || test.empty()) {
      throw ParseError("manifest line " + std::to_string(lineno) + ": empty image path");
    }
    e.ref_path = resolve(base, ref);
    e.test_path = resolve(base, test);
    e.mos = parse_double_field(fields[2], lineno, "mos");
    e.algorithm = std::string(detail::trim(fields[3]));

    const double scale = parse_double_field(fields[4], lineno, "scale");
    e.scale_factor = static_cast<int>(scale);
    if (scale != e.scale_factor || e.scale_factor < 1) {
      throw ParseError("manifest line " + std::to_string(lineno) +
                       ": scale must be a positive integer");
    }

    std::string split{detail::trim(fields[5])};
    if (split.empty()) split = "all";
    if (split != "train" && split != "test" && split != "all") {
      throw ParseError("manifest line " + std::to_string(lineno) +
                       ": split must be train, test, or all");
    }
    e.split = split;

    if (!seen.emplace(e.ref_path, e.test_path).second) {
      m.warnings.push_back("manifest line " + std::to_string(lineno) +
                           ": duplicate pair " + e.ref_path + " / " + e.test_path);
    }
    m.entries.push_back(std::move(e));
  }

  if (!header_seen) throw ParseError("manifest '" + path + "' has no header row");
  return m;
}

ImagePlane load_luminance(const std::string& path) {
  const cv::Mat raw = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw DecodeError("cannot decode image '" + path + "'");

  cv::Mat img;
  switch (raw.depth()) {
    case CV_8U:
      raw.convertTo(img, CV_64F, 1.0 / 255.0);
      break;
    case CV_16U:
      raw.convertTo(img, CV_64F, 1.0 / 65535.0);
      break;
    case CV_32F:
    case CV_64F:
      raw.convertTo(img, CV_64F);
      break;
    default:
      throw DecodeError("unsupported sample depth in '" + path + "'");
  }

  const int w = img.cols;
  const int h = img.rows;
  ImagePlane plane(w, h);
  if (img.channels() == 1) {
    for (int y = 0; y < h; ++y) {
      const double* row = img.ptr<double>(y);
      for (int x = 0; x < w; ++x) plane(x, y) = row[x];
    }
  } else if (img.channels() == 3 || img.channels() == 4) {
    // OpenCV decodes as BGR(A); fold with BT.601 luminance weights.
    const int ch = img.channels();
    for (int y = 0; y < h; ++y) {
      const double* row = img.ptr<double>(y);
      for (int x = 0; x < w; ++x) {
        const double b = row[x * ch + 0];
        const double g = row[x * ch + 1];
        const double r = row[x * ch + 2];
        plane(x, y) = 0.299 * r + 0.587 * g + 0.114 * b;
      }
    }
  } else {
    throw DecodeError("unsupported channel count in '" + path + "'");
  }

  for (double& v : plane.samples()) {
    if (!std::isfinite(v)) v = 0.0;
    v = std::clamp(v, 0.0, 1.0);
  }
  return plane;
}

LoadedPair load_pair(const ManifestEntry& entry) {
  LoadedPair pair;
  pair.reference = load_luminance(entry.ref_path);
  pair.test = load_luminance(entry.test_path);
  if (pair.reference.width() != pair.test.width() ||
      pair.reference.height() != pair.test.height()) {
    throw DimensionMismatch("pair dimensions differ: " + entry.ref_path +
                            " vs " + entry.test_path);
  }
  return pair;
}

void save_gray_bmp(const ImagePlane& img, const std::string& path) {
  const int w = img.width();
  const int h = img.height();
  const int row_bytes = (w * 3 + 3) & ~3;
  const std::uint32_t data_size = static_cast<std::uint32_t>(row_bytes) * h;
  const std::uint32_t file_size = 54 + data_size;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DecodeError("cannot write image '" + path + "'");

  auto put16 = [&](std::uint16_t v) {
    out.put(static_cast<char>(v & 0xff));
    out.put(static_cast<char>((v >> 8) & 0xff));
  };
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  };

  out.put('B');
  out.put('M');
  put32(file_size);
  put32(0);
  put32(54);
  put32(40);  // BITMAPINFOHEADER
  put32(static_cast<std::uint32_t>(w));
  put32(static_cast<std::uint32_t>(h));
  put16(1);
  put16(24);
  put32(0);
  put32(data_size);
  put32(2835);  // 72 dpi
  put32(2835);
  put32(0);
  put32(0);

  std::vector<char> row(static_cast<std::size_t>(row_bytes), 0);
  for (int y = h - 1; y >= 0; --y) {  // bottom-up
    for (int x = 0; x < w; ++x) {
      const double v = std::clamp(img(x, y), 0.0, 1.0);
      const char byte = static_cast<char>(
          static_cast<int>(std::lround(v * 255.0)));
      row[static_cast<std::size_t>(x) * 3 + 0] = byte;
      row[static_cast<std::size_t>(x) * 3 + 1] = byte;
      row[static_cast<std::size_t>(x) * 3 + 2] = byte;
    }
    out.write(row.data(), row_bytes);
  }
  if (!out) throw DecodeError("short write on image '" + path + "'");
}

}  // namespace srif
