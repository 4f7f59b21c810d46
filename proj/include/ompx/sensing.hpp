#pragma once

#include <cstdint>
#include <random>

#include "ompx/matrix.hpp"

namespace ompx {

struct RngSeed {
  std::uint64_t value = 0;
};

// splitmix64 finalizer; used to derive independent sub-seeds from a base
// seed and a stream tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// N(0,1) stream: mt19937_64 + Box-Muller on 53-bit uniforms. The transform
// is fixed so fixtures reproduce across implementations.
class GaussianStream {
 public:
  explicit GaussianStream(RngSeed seed) : rng_(seed.value) {}
  double next();
  std::uint64_t next_u64() { return rng_(); }
  // Uniform integer in [0, bound), rejection sampled (no modulo bias).
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Effective dictionary A = Phi * Psi with cached column norms rho and the
// atom-norm matrix P(i,j) = rho(i)*rho(j).
struct Dictionary {
  DenseMatrix A;           // m x n
  DenseVector col_norms;   // rho, length n
  DenseMatrix atom_norms;  // P, n x n

  std::size_t m() const { return A.rows(); }
  std::size_t n() const { return A.cols(); }
  DenseVector col(std::size_t j) const;  // 0-based
};

// Orthonormal DCT-II matrix: entry (k,j) = s_k * cos(pi*(2j+1)*k/(2n)),
// s_0 = sqrt(1/n), s_k = sqrt(2/n) otherwise.
DenseMatrix dct_matrix(std::size_t n);

DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, RngSeed seed);

Dictionary build_dictionary(const DenseMatrix& phi, const DenseMatrix& psi);

// Rebuild a Dictionary from a stored A (norms recomputed).
Dictionary dictionary_from_matrix(DenseMatrix a);

// Omega = kron(A, A), m^2 x n^2. Serves the 1D path and tests only.
// cap_bytes > 0 rejects the allocation when 8*m^2*n^2 exceeds it.
DenseMatrix build_omega(const Dictionary& dict, std::size_t cap_bytes = 0);

// Column l2-norms of a dictionary matrix (rho for Omega).
DenseVector column_norms(const DenseMatrix& m);

// Y = A * Z * A^T via two rectangular products; never touches Omega.
DenseMatrix sample_separable(const Dictionary& dict, const DenseMatrix& z);

}  // namespace ompx
