#pragma once

// Straight-line reference formulas for the metric checks; deliberately naive.

#include <cmath>
#include <cstddef>
#include <vector>

#include "cladbench/rng.hpp"

namespace oracle {

inline double r2(const std::vector<double>& y, const std::vector<double>& p) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - p[i]) * (y[i] - p[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return 1.0 - ss_res / ss_tot;
}

inline double mae(const std::vector<double>& y, const std::vector<double>& p) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - p[i]);
  return s / static_cast<double>(y.size());
}

inline double accuracy(const std::vector<double>& y, const std::vector<double>& p) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hit += y[i] == p[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(y.size());
}

// counts[truth][pred]
inline std::vector<std::vector<std::size_t>> confusion(const std::vector<double>& y, const std::vector<double>& p) {
  std::vector<std::vector<std::size_t>> c(2, std::vector<std::size_t>(2, 0));
  for (std::size_t i = 0; i < y.size(); ++i) ++c[static_cast<int>(y[i])][static_cast<int>(p[i])];
  return c;
}

// probability a random positive outscores a random negative, ties half
inline double pairwise_auc(const std::vector<double>& y, const std::vector<double>& s) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1.0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0.0) continue;
      pairs += 1;
      if (s[i] > s[j]) wins += 1;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct Case {
  std::vector<double> truth;
  std::vector<double> values;  // predictions or scores
};

// Continuous pair for regression metrics.
inline Case regression_case(clad::Rng& rng) {
  const auto n = static_cast<std::size_t>(rng.uniform_int(2, 120));
  Case c;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 100 * rng.normal();
    c.truth.push_back(t);
    c.values.push_back(t + 30 * rng.normal());
  }
  return c;
}

// Binary labels with both classes present; scores on a coarse grid so ties occur.
inline Case binary_case(clad::Rng& rng) {
  const auto n = static_cast<std::size_t>(rng.uniform_int(2, 120));
  Case c;
  for (std::size_t i = 0; i < n; ++i) {
    c.truth.push_back(rng.uniform() < 0.5 ? 0.0 : 1.0);
    c.values.push_back(std::round(rng.uniform() * 20) / 20);
  }
  c.truth[0] = 0.0;
  c.truth[1] = 1.0;
  return c;
}

}  // namespace oracle
