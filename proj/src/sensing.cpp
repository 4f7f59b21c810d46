#include "ompx/sensing.hpp"

#include <cmath>
#include <numbers>

namespace ompx {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Uniforms in (0,1]: ((x >> 11) + 1) * 2^-53, so log never sees 0.
  const double u1 =
      (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 =
      (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t GaussianStream::next_below(std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    const std::uint64_t x = rng_();
    if (x < limit) return x % bound;
  }
}

DenseVector Dictionary::col(std::size_t j) const {
  DenseVector v(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) v[i] = A(i, j);
  return v;
}

DenseMatrix dct_matrix(std::size_t n) {
  if (n == 0) throw ShapeError("dct_matrix: n must be >= 1");
  DenseMatrix psi(n, n);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = (k == 0) ? s0 : sk;
    for (std::size_t j = 0; j < n; ++j) {
      psi(k, j) = scale * std::cos(std::numbers::pi *
                                   (2.0 * static_cast<double>(j) + 1.0) *
                                   static_cast<double>(k) /
                                   (2.0 * static_cast<double>(n)));
    }
  }
  return psi;
}

DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, RngSeed seed) {
  if (m == 0 || n == 0) throw ShapeError("gaussian_matrix: dims must be >= 1");
  GaussianStream g(seed);
  DenseMatrix phi(m, n);
  for (double& x : phi.data()) x = g.next();
  return phi;
}

DenseVector column_norms(const DenseMatrix& m) {
  DenseVector sq(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row_ptr(i);
    for (std::size_t j = 0; j < m.cols(); ++j) sq[j] += row[j] * row[j];
  }
  for (std::size_t j = 0; j < m.cols(); ++j) sq[j] = std::sqrt(sq[j]);
  return sq;
}

Dictionary dictionary_from_matrix(DenseMatrix a) {
  Dictionary d;
  d.col_norms = column_norms(a);
  const std::size_t n = a.cols();
  d.atom_norms = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d.atom_norms(i, j) = d.col_norms[i] * d.col_norms[j];
  d.A = std::move(a);
  return d;
}

Dictionary build_dictionary(const DenseMatrix& phi, const DenseMatrix& psi) {
  if (psi.rows() != psi.cols()) {
    throw ShapeError("build_dictionary: psi must be square, got " +
                     shape_str(psi));
  }
  return dictionary_from_matrix(matmul(phi, psi));
}

DenseMatrix build_omega(const Dictionary& dict, std::size_t cap_bytes) {
  const std::size_t m = dict.m(), n = dict.n();
  const std::size_t required = sizeof(double) * m * m * n * n;
  if (cap_bytes > 0 && required > cap_bytes) {
    throw MemoryCapError("build_omega: requires " + std::to_string(required) +
                             " bytes, cap is " + std::to_string(cap_bytes),
                         required);
  }
  return kron(dict.A, dict.A);
}

DenseMatrix sample_separable(const Dictionary& dict, const DenseMatrix& z) {
  if (z.rows() != dict.n() || z.cols() != dict.n()) {
    throw ShapeError("sample_separable: Z must be " +
                     std::to_string(dict.n()) + "x" + std::to_string(dict.n()) +
                     ", got " + shape_str(z));
  }
  return matmul_nt(matmul(dict.A, z), dict.A);
}

}  // namespace ompx
