#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cladbench/linalg.hpp"
#include "cladbench/rng.hpp"

namespace testutil {

inline clad::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                  double lo = 0.0, double hi = 1.0) {
  clad::Rng rng(seed);
  clad::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

inline clad::Matrix rows_of(std::initializer_list<std::initializer_list<double>> rows) {
  clad::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline clad::Vector vec(std::initializer_list<double> values) {
  clad::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline std::vector<double> to_std(const clad::Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace testutil
