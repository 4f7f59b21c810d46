#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ompx/sensing.hpp"

namespace ompx {

// One nonzero of a k-sparse coefficient matrix. Coordinates are 1-based
// everywhere on external surfaces.
struct Spike {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

struct SparseSignal2D {
  std::size_t n = 0;
  std::vector<Spike> spikes;  // exactly k, distinct positions, nonzero values

  std::size_t k() const { return spikes.size(); }
  DenseMatrix dense() const;
};

// k distinct positions uniform without replacement, values i.i.d. N(0,1)
// (resampled on an exact 0.0 draw).
SparseSignal2D sparse_signal(std::size_t n, std::size_t k, RngSeed seed);

struct InstanceConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  RngSeed seed;
};

struct Instance {
  Dictionary dict;
  SparseSignal2D z_true;
  DenseMatrix Y;  // m x m
  std::optional<DenseMatrix> omega;
  InstanceConfig config;
};

// Psi = dct_matrix(n), Phi = gaussian_matrix(m, n, sub-seed),
// Z = sparse_signal(n, k, sub-seed), Y = A Z A^T.
Instance make_instance(std::size_t n, std::size_t m, std::size_t k,
                       RngSeed seed, bool with_omega,
                       std::size_t omega_cap_bytes = 0);

// Fixture hook: assemble an instance from explicit Phi/Psi/Z (e.g. identity
// sensing). Not reachable from the CLI.
Instance make_instance_custom(const DenseMatrix& phi, const DenseMatrix& psi,
                              SparseSignal2D z, bool with_omega);

// Directory layout: config.txt (key=value), A.txt and Y.txt in the textual
// matrix format, spikes.csv with rows "row,col,value".
void save_instance(const std::string& dir, const Instance& inst);
Instance load_instance(const std::string& dir);

}  // namespace ompx
