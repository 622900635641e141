#pragma once

#include "oracles.hpp"
#include "sketchridge/linalg.hpp"

inline sketchridge::DenseMatrix to_dense(const oracle::Mat& m) {
  sketchridge::DenseMatrix out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
  return out;
}

inline oracle::Mat to_mat(const sketchridge::DenseMatrix& m) {
  oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline double rel_diff(const oracle::Vec& a, const oracle::Vec& b) {
  const double denom = std::max(oracle::norm(b), 1e-300);
  return oracle::norm(oracle::sub(a, b)) / denom;
}

inline double max_entry_diff(const sketchridge::DenseMatrix& a, const oracle::Mat& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b[i][j]));
  return worst;
}
