#include "srif/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "srif/errors.hpp"

namespace srif {

namespace {

double sample_mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(std::span<const double> v) {
  const double m = sample_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DegenerateScores("correlation of a constant sequence");
  }
  return sab / (std::sqrt(saa) * std::sqrt(sbb));
}

struct NmResult {
  std::vector<double> x;
  double f = 0.0;
};

// Nelder-Mead with the customary reflection/expansion/contraction constants
// and an fminsearch-style initial simplex. Stops when the simplex diameter
// falls below diam_tol or after max_iter shrinks of progress.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> x0, int max_iter, double diam_tol) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double& c = xs[i + 1][i];
    c = c != 0.0 ? c * 1.05 : 0.00025;
  }
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<std::size_t> order(n + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second_worst = order[n - 1];

    double diam = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        diam = std::max(diam, std::abs(xs[i][d] - xs[best][d]));
      }
    }
    if (diam < diam_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d) {
        p[d] = centroid[d] + t * (centroid[d] - xs[worst][d]);
      }
      return p;
    };

    std::vector<double> refl = blend(1.0);
    const double f_refl = f(refl);
    if (f_refl < fs[best]) {
      std::vector<double> expd = blend(2.0);
      const double f_expd = f(expd);
      if (f_expd < f_refl) {
        xs[worst] = std::move(expd);
        fs[worst] = f_expd;
      } else {
        xs[worst] = std::move(refl);
        fs[worst] = f_refl;
      }
      continue;
    }
    if (f_refl < fs[second_worst]) {
      xs[worst] = std::move(refl);
      fs[worst] = f_refl;
      continue;
    }
    const bool outside = f_refl < fs[worst];
    std::vector<double> contr = blend(outside ? 0.5 : -0.5);
    const double f_contr = f(contr);
    if (f_contr < std::min(f_refl, fs[worst])) {
      xs[worst] = std::move(contr);
      fs[worst] = f_contr;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) {
        xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
      }
      fs[i] = f(xs[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  return {xs[best], fs[best]};
}

double logistic_raw(double x, double b1, double b2, double b3, double b4,
                    double b5) {
  const double t = b2 * (x - b3);
  // 1/2 - 1/(1 + e^t) = sigma(t) - 1/2, computed without overflow.
  double sig;
  if (t >= 0.0) {
    sig = 1.0 / (1.0 + std::exp(-t));
  } else {
    const double e = std::exp(t);
    sig = e / (1.0 + e);
  }
  return b1 * (sig - 0.5) + b4 * x + b5;
}

}  // namespace

double logistic(double x, const LogisticParams& p) {
  return logistic_raw(x, p.beta1, p.beta2, p.beta3, p.beta4, p.beta5);
}

LogisticParams fit_logistic(std::span<const double> scores,
                            std::span<const double> mos) {
  if (scores.size() != mos.size()) {
    throw DimensionMismatch("score and opinion sequences differ in length");
  }
  if (scores.size() < 5) {
    throw InsufficientData("logistic fit needs at least 5 points");
  }
  const double score_std = population_std(scores);
  if (score_std == 0.0) {
    throw DegenerateScores("logistic fit over constant scores");
  }

  const auto [mos_min_it, mos_max_it] = std::minmax_element(mos.begin(), mos.end());
  const double mean_s = sample_mean(scores);
  const double mean_m = sample_mean(mos);
  // beta2 is optimized as exp(u) so the slope stays positive.
  std::vector<double> p0 = {*mos_max_it - *mos_min_it, std::log(1.0 / score_std),
                            mean_s, 0.0, mean_m};
  // Second start at the plain least-squares line: the linear model is nested
  // (beta1 = 0) and the simplex can stall on that ridge for near-linear data.
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    sxx += (scores[i] - mean_s) * (scores[i] - mean_s);
    sxy += (scores[i] - mean_s) * (mos[i] - mean_m);
  }
  const double slope = sxy / sxx;
  std::vector<double> p1 = {0.0, std::log(1.0 / score_std), mean_s, slope,
                            mean_m - slope * mean_s};
  auto objective = [&](const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double r =
          logistic_raw(scores[i], p[0], std::exp(p[1]), p[2], p[3], p[4]) -
          mos[i];
      acc += r * r;
    }
    return acc;
  };

  NmResult best{p0, objective(p0)};
  for (const std::vector<double>& start : {p0, p1}) {
    NmResult cur{start, objective(start)};
    for (int round = 0; round < 4; ++round) {
      NmResult r = nelder_mead(objective, cur.x, 5000, 1e-10);
      const bool improved = r.f < cur.f - 1e-12 * (1.0 + cur.f);
      if (r.f < cur.f) cur = std::move(r);
      if (!improved) break;
    }
    if (cur.f < best.f) best = std::move(cur);
  }

  return LogisticParams{best.x[0], std::exp(best.x[1]), best.x[2], best.x[3],
                        best.x[4]};
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // Positions i..j (1-based i+1..j+1) share their average rank.
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("srcc inputs differ in length");
  if (a.size() < 4) throw InsufficientData("srcc needs at least 4 points");
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  return pearson(ra, rb);
}

double krcc(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("krcc inputs differ in length");
  if (a.size() < 4) throw InsufficientData("krcc needs at least 4 points");
  const std::size_t n = a.size();
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 && db == 0.0) continue;
      if (da == 0.0) {
        ++ties_a;
      } else if (db == 0.0) {
        ++ties_b;
      } else if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double pairs_a = static_cast<double>(concordant + discordant + ties_b);
  const double pairs_b = static_cast<double>(concordant + discordant + ties_a);
  if (pairs_a == 0.0 || pairs_b == 0.0) {
    throw DegenerateScores("tau of a constant sequence");
  }
  return static_cast<double>(concordant - discordant) /
         (std::sqrt(pairs_a) * std::sqrt(pairs_b));
}

PlccRmse plcc_rmse(std::span<const double> scores, std::span<const double> mos,
                   const LogisticParams& p) {
  if (scores.size() != mos.size()) {
    throw DimensionMismatch("plcc inputs differ in length");
  }
  if (scores.size() < 4) throw InsufficientData("plcc needs at least 4 points");
  std::vector<double> mapped(scores.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    mapped[i] = logistic(scores[i], p);
    const double r = mapped[i] - mos[i];
    sq += r * r;
  }
  PlccRmse out;
  out.plcc = pearson(mapped, mos);
  out.rmse = std::sqrt(sq / static_cast<double>(scores.size()));
  return out;
}

EvaluationReport evaluate_scores(std::span<const double> scores,
                                 std::span<const double> mos) {
  if (scores.size() != mos.size()) {
    throw DimensionMismatch("evaluation inputs differ in length");
  }
  if (scores.size() < 5) {
    throw InsufficientData("evaluation needs at least 5 scored pairs");
  }
  EvaluationReport rep;
  rep.n = scores.size();
  rep.params = fit_logistic(scores, mos);
  rep.srcc = srcc(scores, mos);
  rep.krcc = krcc(scores, mos);
  const PlccRmse pr = plcc_rmse(scores, mos, rep.params);
  rep.plcc = pr.plcc;
  rep.rmse = pr.rmse;
  return rep;
}

}  // namespace srif
