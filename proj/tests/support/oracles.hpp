#pragma once

// Independent reference computations used only by tests. Nothing in here may
// call the implementation path it is checking.

#include <algorithm>
#include <complex>
#include <vector>

#include "rhn/numerics.hpp"

namespace oracles {

// Determinant by cofactor expansion along the first row. O(n!) — intended
// for n <= 8.
inline double det_cofactor(const rhn::Matrix& a) {
  const std::size_t n = a.rows;
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double det = 0.0;
  double sign = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    rhn::Matrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    det += sign * a(0, j) * det_cofactor(minor);
    sign = -sign;
  }
  return det;
}

inline std::vector<rhn::Complex> sorted_complex(std::vector<rhn::Complex> v) {
  std::sort(v.begin(), v.end(), [](const rhn::Complex& a, const rhn::Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

// Distance from a point to the union of Gersgorin discs of a matrix
// (0 when inside).
inline double disc_union_distance(const rhn::Matrix& a, const rhn::Complex& lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows; ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (j != i) radius += std::abs(a(i, j));
    }
    const double dist = std::abs(lambda - rhn::Complex(a(i, i), 0.0)) - radius;
    best = std::min(best, std::max(0.0, dist));
  }
  return best;
}

}  // namespace oracles
