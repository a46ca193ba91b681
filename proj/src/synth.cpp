#include "srif/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <vector>

#include "srif/dataset.hpp"
#include "srif/errors.hpp"
#include "srif/filter.hpp"
#include "text.hpp"

namespace srif::synth {

namespace {

struct Distortion {
  const char* name;
  ImagePlane (*apply)(const ImagePlane&, double, std::uint64_t);
};

ImagePlane distort_blur(const ImagePlane& img, double t, std::uint64_t) {
  return gaussian_blur(img, 0.6 + 3.4 * t);
}

ImagePlane distort_noise(const ImagePlane& img, double t, std::uint64_t seed) {
  return add_noise(img, 0.02 + 0.13 * t, seed);
}

ImagePlane distort_blur_noise(const ImagePlane& img, double t, std::uint64_t seed) {
  return add_noise(gaussian_blur(img, 0.5 + 1.5 * t), 0.01 + 0.05 * t, seed);
}

// Smooth the real detail away and paint statistically plausible fake detail
// on top, the failure mode adversarially trained upscalers are prone to.
ImagePlane distort_fake_texture(const ImagePlane& img, double t, std::uint64_t seed) {
  ImagePlane out = gaussian_blur(img, 0.5 + 1.5 * t);
  const ImagePlane grain =
      value_noise(img.width(), img.height(), 6, 0.8, seed ^ 0x9e3779b97f4a7c15ULL);
  const double amp = 0.05 + 0.12 * t;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out(x, y) = std::clamp(out(x, y) + amp * (grain(x, y) - 0.5), 0.0, 1.0);
    }
  }
  return out;
}

constexpr Distortion kDistortions[] = {
    {"blur", distort_blur},
    {"noise", distort_noise},
    {"blur_noise", distort_blur_noise},
    {"fake_texture", distort_fake_texture},
};

}  // namespace

ImagePlane value_noise(int width, int height, int octaves, double persistence,
                       std::uint64_t seed) {
  if (width < 1 || height < 1) throw DimensionTooSmall("noise image dimensions");
  if (octaves < 1) octaves = 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  ImagePlane acc(width, height, 0.0);
  double amp = 1.0;
  for (int o = 0; o < octaves; ++o) {
    const int cells = 4 << o;
    std::vector<double> grid(static_cast<std::size_t>(cells + 1) * (cells + 1));
    for (double& g : grid) g = uni(rng);

    for (int y = 0; y < height; ++y) {
      const double gy = height > 1
                            ? static_cast<double>(y) / (height - 1) * cells
                            : 0.0;
      const int y0 = std::min(static_cast<int>(gy), cells - 1);
      const double fy = gy - y0;
      for (int x = 0; x < width; ++x) {
        const double gx = width > 1
                              ? static_cast<double>(x) / (width - 1) * cells
                              : 0.0;
        const int x0 = std::min(static_cast<int>(gx), cells - 1);
        const double fx = gx - x0;
        const auto at = [&](int cx, int cy) {
          return grid[static_cast<std::size_t>(cy) * (cells + 1) + cx];
        };
        const double top = at(x0, y0) * (1 - fx) + at(x0 + 1, y0) * fx;
        const double bot = at(x0, y0 + 1) * (1 - fx) + at(x0 + 1, y0 + 1) * fx;
        acc(x, y) += amp * (top * (1 - fy) + bot * fy);
      }
    }
    amp *= persistence;
  }

  double lo = acc(0, 0);
  double hi = lo;
  for (double v : acc.samples()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  for (double& v : acc.samples()) {
    v = 0.05 + 0.9 * (v - lo) / span;
  }
  return acc;
}

ImagePlane textured_image(int width, int height, double richness,
                          std::uint64_t seed) {
  richness = std::clamp(richness, 0.0, 1.0);
  const int octaves = 2 + static_cast<int>(std::lround(richness * 4.0));
  const double persistence = 0.4 + 0.35 * richness;
  ImagePlane img = value_noise(width, height, octaves, persistence, seed);

  // A soft diagonal step keeps some unambiguous structure in every image.
  const double cx = 0.3 + 0.4 * ((seed >> 8) % 97) / 96.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / width - cx +
                       0.25 * (static_cast<double>(y) / height - 0.5);
      const double edge = 1.0 / (1.0 + std::exp(-u * 80.0));
      img(x, y) = std::clamp(img(x, y) * 0.8 + 0.2 * edge, 0.0, 1.0);
    }
  }
  return img;
}

ImagePlane gaussian_blur(const ImagePlane& img, double sigma) {
  if (sigma <= 0.0) return img;
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  const auto taps = gaussian_window(2 * radius + 1, sigma);
  return separable_filter(img, taps, taps);
}

ImagePlane add_noise(const ImagePlane& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  ImagePlane out = img;
  for (double& v : out.samples()) {
    v = std::clamp(v + gauss(rng), 0.0, 1.0);
  }
  return out;
}

std::string generate_labeled_dataset(const SynthOptions& opt, const RunConfig& cfg,
                                     const std::string& out_dir, std::ostream* log) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  std::string manifest;
  manifest += "# synthetic super-resolution benchmark, planted opinion scores\n";
  manifest += "ref_path,test_path,mos,algorithm,scale,split\n";

  std::mt19937_64 mos_rng(opt.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::normal_distribution<double> mos_noise(0.0, opt.mos_noise);

  int pair_index = 0;
  for (int c = 0; c < opt.contents; ++c) {
    const double richness =
        opt.contents > 1 ? static_cast<double>(c) / (opt.contents - 1) : 0.5;
    const std::uint64_t content_seed = opt.seed + 1000003ULL * c;
    // Hold out every sixth content wholesale so the splits never share a
    // reference image.
    const char* split = c % 6 == 5 ? "test" : "train";
    const ImagePlane ref =
        textured_image(opt.width, opt.height, richness, content_seed);
    char ref_name[64];
    std::snprintf(ref_name, sizeof(ref_name), "ref_%03d.bmp", c);
    save_gray_bmp(ref, (dir / ref_name).string());

    for (const Distortion& dist : kDistortions) {
      for (int s = 1; s <= opt.severities; ++s) {
        const double t = static_cast<double>(s) / opt.severities;
        const ImagePlane test =
            dist.apply(ref, t, content_seed ^ (0x100000001b3ULL * s));
        char test_name[64];
        std::snprintf(test_name, sizeof(test_name), "test_%04d.bmp", pair_index);
        save_gray_bmp(test, (dir / test_name).string());

        const FidelityReport rep = score_pair(ref, test, cfg, nullptr);
        // Planted opinion: the weight drifts from the deterministic side to
        // the statistical side as the assorted factor grows.
        const double lambda = std::clamp(1.05 - 0.3 * rep.f, 0.2, 0.85);
        const double mos = std::clamp(
            100.0 * (lambda * rep.d + (1.0 - lambda) * rep.s_sim) +
                mos_noise(mos_rng),
            0.0, 100.0);

        manifest += std::string(ref_name) + "," + test_name + "," +
                    detail::format_g17(mos) + "," + dist.name + ",4," + split +
                    "\n";
        ++pair_index;
      }
    }
    if (log != nullptr) {
      *log << "content " << (c + 1) << "/" << opt.contents << " done\n";
    }
  }

  const std::string manifest_path = (dir / "manifest.csv").string();
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw ParseError("cannot write manifest '" + manifest_path + "'");
  out << manifest;
  return manifest_path;
}

}  // namespace srif::synth
