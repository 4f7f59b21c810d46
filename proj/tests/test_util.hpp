#pragma once

#include "ompx/sensing.hpp"

namespace ompx::testutil {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols,
                                 std::uint64_t seed) {
  return gaussian_matrix(rows, cols, RngSeed{seed});
}

inline DenseVector random_vector(std::size_t len, std::uint64_t seed) {
  GaussianStream g(RngSeed{seed});
  DenseVector v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = g.next();
  return v;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = std::abs(a.data()[i] - b.data()[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace ompx::testutil
