#include "srif/lpc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "fft.hpp"
#include "srif/errors.hpp"
#include "srif/filter.hpp"

namespace srif {

namespace {

constexpr int kMinDim = 32;
constexpr double kEnergyFloor = 1e-12;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::uint64_t fnv64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_key(const LpcConfig& cfg) {
  const double fields[] = {static_cast<double>(cfg.scales),
                           static_cast<double>(cfg.orientations),
                           cfg.wavelength0,
                           cfg.sigma_on_f,
                           cfg.theta_sigma_ratio,
                           cfg.c_stab,
                           cfg.rank_decay,
                           cfg.pool_fraction};
  return fnv64(fields, sizeof(fields), 14695981039346656037ULL);
}

// Frequency-domain filter bank plus transform plans for one padded size.
struct LpcBank {
  LpcBank(int pw, int ph, const LpcConfig& cfg)
      : fft(pw, ph),
        radial(cfg.scales),
        angular(cfg.orientations) {
    const std::size_t n = static_cast<std::size_t>(pw) * ph;
    std::vector<double> fx(pw), fy(ph);
    for (int i = 0; i < pw; ++i) {
      fx[i] = (i <= pw / 2 ? i : i - pw) / static_cast<double>(pw);
    }
    for (int i = 0; i < ph; ++i) {
      fy[i] = (i <= ph / 2 ? i : i - ph) / static_cast<double>(ph);
    }

    const double log_sigma = std::log(cfg.sigma_on_f);
    for (int s = 0; s < cfg.scales; ++s) {
      radial[s].assign(n, 0.0);
      const double f0 = 1.0 / (cfg.wavelength0 * std::pow(2.0, s));
      std::size_t i = 0;
      for (int y = 0; y < ph; ++y) {
        for (int x = 0; x < pw; ++x, ++i) {
          const double r = std::hypot(fx[x], fy[y]);
          if (r <= 0.0) continue;  // band-pass: no DC response
          const double lr = std::log(r / f0);
          double g = std::exp(-(lr * lr) / (2.0 * log_sigma * log_sigma));
          // Roll off the corner frequencies beyond Nyquist.
          g /= 1.0 + std::pow(r / 0.45, 30.0);
          radial[s][i] = g;
        }
      }
    }

    const double theta_sigma =
        (std::numbers::pi / cfg.orientations) / cfg.theta_sigma_ratio;
    for (int o = 0; o < cfg.orientations; ++o) {
      angular[o].assign(n, 0.0);
      const double theta0 = o * std::numbers::pi / cfg.orientations;
      std::size_t i = 0;
      for (int y = 0; y < ph; ++y) {
        for (int x = 0; x < pw; ++x, ++i) {
          const double theta = std::atan2(fy[y], fx[x]);
          // One-sided in direction: the conjugate half-plane is excluded so
          // the spatial coefficients come out analytic.
          const double d =
              std::remainder(theta - theta0, 2.0 * std::numbers::pi);
          angular[o][i] =
              std::exp(-(d * d) / (2.0 * theta_sigma * theta_sigma));
        }
      }
    }
  }

  detail::Fft2D fft;
  std::vector<std::vector<double>> radial;
  std::vector<std::vector<double>> angular;
};

std::shared_ptr<const LpcBank> get_bank(int pw, int ph, const LpcConfig& cfg) {
  using Key = std::tuple<int, int, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const LpcBank>> cache;

  const Key key{pw, ph, config_key(cfg)};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto bank = std::make_shared<const LpcBank>(pw, ph, cfg);
  cache.emplace(key, bank);
  return bank;
}

double taper_weight(int i, int n, int width) {
  const int t = std::min(i, n - 1 - i);
  if (t >= width) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * (t + 0.5) / width));
}

}  // namespace

void LpcConfig::validate() const {
  if (scales != 3) {
    throw WeightNormalization("lpc.scales: the phase predictor is fixed at 3");
  }
  if (orientations < 4) throw WeightNormalization("lpc.orientations must be at least 4");
  if (wavelength0 < 2.0) throw WeightNormalization("lpc.wavelength0 must be at least 2");
  if (sigma_on_f <= 0.0 || sigma_on_f >= 1.0) {
    throw WeightNormalization("lpc.sigma_on_f must lie in (0, 1)");
  }
  if (theta_sigma_ratio <= 0.0) throw WeightNormalization("lpc.theta_sigma_ratio must be positive");
  if (c_stab <= 0.0) throw WeightNormalization("lpc.c_stab must be positive");
  if (rank_decay <= 0.0) throw WeightNormalization("lpc.rank_decay must be positive");
  if (pool_fraction <= 0.0 || pool_fraction > 1.0) {
    throw WeightNormalization("lpc.pool_fraction must lie in (0, 1]");
  }
}

double lpc_si(const ImagePlane& img, const LpcConfig& cfg) {
  cfg.validate();
  const int w = img.width();
  const int h = img.height();
  if (w < kMinDim || h < kMinDim) {
    throw DimensionTooSmall("sharpness needs at least 32 pixels per axis");
  }

  const int pw = next_pow2(w);
  const int ph = next_pow2(h);
  const std::size_t pn = static_cast<std::size_t>(pw) * ph;
  const auto bank = get_bank(pw, ph, cfg);

  // Mirror-extend into the padded frame, remove the mean, and taper the
  // frame edges so the periodic transform sees no seam.
  const double mu = mean(img);
  detail::FftBuffer spectrum = detail::alloc_complex(pn);
  const int taper_x = std::min(8, pw / 2);
  const int taper_y = std::min(8, ph / 2);
  {
    std::size_t i = 0;
    for (int y = 0; y < ph; ++y) {
      const int sy = reflect_index(y, h);
      const double wy = taper_weight(y, ph, taper_y);
      for (int x = 0; x < pw; ++x, ++i) {
        const int sx = reflect_index(x, w);
        const double wx = taper_weight(x, pw, taper_x);
        spectrum[i] = (img(sx, sy) - mu) * wx * wy;
      }
    }
  }
  bank->fft.forward(spectrum.get());

  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> num(n, 0.0), den(n, 0.0);
  detail::FftBuffer filtered = detail::alloc_complex(pn);
  std::vector<std::vector<std::complex<double>>> coeff(
      static_cast<std::size_t>(cfg.scales));
  for (auto& c : coeff) c.resize(n);

  for (int o = 0; o < cfg.orientations; ++o) {
    for (int s = 0; s < cfg.scales; ++s) {
      const auto& rad = bank->radial[static_cast<std::size_t>(s)];
      const auto& ang = bank->angular[static_cast<std::size_t>(o)];
      for (std::size_t i = 0; i < pn; ++i) {
        filtered[i] = spectrum[i] * (rad[i] * ang[i]);
      }
      bank->fft.inverse(filtered.get());
      auto& c = coeff[static_cast<std::size_t>(s)];
      std::size_t j = 0;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x, ++j) {
          c[j] = filtered[static_cast<std::size_t>(y) * pw + x];
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::complex<double> c1 = coeff[0][j];
      const std::complex<double> c2 = coeff[1][j];
      const std::complex<double> c3 = coeff[2][j];
      // Linear phase satisfies arg(c1) - 3 arg(c2) + 2 arg(c3) = 0, so the
      // cosine of that combination measures local coherence.
      const std::complex<double> z =
          c1 * std::conj(c2) * std::conj(c2) * std::conj(c2) * c3 * c3;
      const double zm = std::abs(z);
      const double coherence = zm > 0.0 ? z.real() / zm : 0.0;
      const double energy = std::abs(c1);
      num[j] += energy * coherence;
      den[j] += energy;
    }
  }

  double total_energy = 0.0;
  for (double d : den) total_energy += d;
  if (total_energy < kEnergyFloor) return 0.0;

  std::vector<double> strength(n);
  for (std::size_t j = 0; j < n; ++j) {
    strength[j] = num[j] / (den[j] + cfg.c_stab);
  }
  std::sort(strength.begin(), strength.end(), std::greater<double>());

  const std::size_t keep = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(cfg.pool_fraction * n)), 1, n);
  double wsum = 0.0;
  double acc = 0.0;
  const double decay =
      n > 1 ? 1.0 / ((static_cast<double>(n) - 1.0) * cfg.rank_decay) : 0.0;
  for (std::size_t k = 0; k < keep; ++k) {
    const double u = std::exp(-static_cast<double>(k) * decay);
    acc += u * strength[k];
    wsum += u;
  }
  return std::clamp(acc / wsum, 0.0, 1.0);
}

}  // namespace srif
