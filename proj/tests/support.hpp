#pragma once

#include <algorithm>
#include <cmath>

#include "dynphase/linalg.hpp"
#include "oracles.hpp"

namespace testing {

inline oracle::Mat to_oracle(const dynphase::ComplexMatrix& m) {
  oracle::Mat out = oracle::zeros(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

inline oracle::Vec to_oracle(const dynphase::ComplexVector& v) { return v.values(); }

inline double max_diff(const dynphase::ComplexMatrix& a, const oracle::Mat& b) {
  double out = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out = std::max(out, std::abs(a(r, c) - b[r][c]));
  return out;
}

inline double max_diff(const dynphase::ComplexVector& a, const oracle::Vec& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

inline double max_abs(const oracle::Mat& m) {
  double out = 0.0;
  for (const auto& row : m)
    for (const auto& z : row) out = std::max(out, std::abs(z));
  return out;
}

inline double rel(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testing
