#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srif {

// Five-parameter monotone regression curve used to map objective scores onto
// the subjective scale before computing linear statistics.
struct LogisticParams {
  double beta1 = 0.0;
  double beta2 = 1.0;  // > 0
  double beta3 = 0.0;
  double beta4 = 0.0;
  double beta5 = 0.0;
};

double logistic(double x, const LogisticParams& p);

// Least-squares fit by Nelder-Mead with beta2 optimized in log space, a
// deterministic start, and restart passes until the simplex stops improving.
LogisticParams fit_logistic(std::span<const double> scores,
                            std::span<const double> mos);

// Fractional (average) ranks; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

// Spearman correlation: Pearson over average ranks.
double srcc(std::span<const double> a, std::span<const double> b);

// Kendall tau-b with tie correction.
double krcc(std::span<const double> a, std::span<const double> b);

struct PlccRmse {
  double plcc = 0.0;
  double rmse = 0.0;
};

// Pearson correlation and root-mean-square error after the logistic mapping.
PlccRmse plcc_rmse(std::span<const double> scores, std::span<const double> mos,
                   const LogisticParams& p);

struct EvaluationReport {
  double srcc = 0.0;
  double krcc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
  LogisticParams params;
  std::size_t n = 0;
};

EvaluationReport evaluate_scores(std::span<const double> scores,
                                 std::span<const double> mos);

}  // namespace srif
