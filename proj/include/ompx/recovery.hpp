#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ompx/sensing.hpp"

namespace ompx {

struct OmpConfig {
  std::size_t k = 1;    // sparsity level, max iterations
  double tol = 1e-12;   // early stop: residual norm <= tol * input norm
};

// Multiply-add counts per algorithm phase. Cholesky factor/solve inside the
// weight refit is charged analytically (t^3/6 + t^2 per refit).
struct FlopCounts {
  std::uint64_t project = 0;
  std::uint64_t weights = 0;
  std::uint64_t residual = 0;
};

enum class OmpStatus {
  ok,
  degenerate_abort,  // solve_spd hit a degenerate atom set; result is the
                     // last completed iterate
};

struct OmpResult {
  // Flat 1-based atom ids, n*(i-1)+j; selection order. Pairwise distinct.
  std::vector<std::size_t> selected;
  DenseVector weights;                 // aligned with selected
  std::vector<double> residual_norms;  // one per completed iteration
  std::size_t iterations = 0;
  DenseVector coefficients;            // length n^2, row-major scatter of weights
  FlopCounts flops;
  OmpStatus status = OmpStatus::ok;

  // (i, j), 1-based, of the t-th selected atom on an n-wide grid.
  std::pair<std::size_t, std::size_t> atom_coords(std::size_t t,
                                                  std::size_t n) const {
    const std::size_t flat = selected[t] - 1;
    return {flat / n + 1, flat % n + 1};
  }
  DenseMatrix coefficients_matrix(std::size_t n) const {
    return unstretch(coefficients, n, n);
  }
};

// Omega^T r ./ rho. Entries with rho == 0 come back as 0 (atom unusable).
DenseVector project_1d(const DenseMatrix& omega, const DenseVector& r,
                       const DenseVector& rho);

OmpResult omp1d(const DenseMatrix& omega, const DenseVector& rho,
                const DenseVector& y, const OmpConfig& cfg);

// A^T R A ./ P. Entries with P == 0 come back as 0.
DenseMatrix project_2d(const Dictionary& dict, const DenseMatrix& r);

// Normal equations over rank-1 atoms, built incrementally: appending an atom
// adds one H row/column at O(t*m) and one f entry at O(m^2) and leaves
// existing entries bit-identical.
class NormalSystem2D {
 public:
  NormalSystem2D(const Dictionary& dict, const DenseMatrix& y);

  void append(std::size_t i, std::size_t j);  // 1-based atom coordinates
  std::size_t size() const { return atoms_.size(); }

  DenseMatrix gram() const;   // H, t x t
  DenseVector rhs() const;    // f, length t
  const DenseVector& row_col(std::size_t t) const { return row_cols_[t]; }
  const DenseVector& col_col(std::size_t t) const { return col_cols_[t]; }
  std::uint64_t flops() const { return flops_; }

 private:
  const Dictionary& dict_;
  const DenseMatrix& y_;
  std::vector<std::pair<std::size_t, std::size_t>> atoms_;  // 0-based
  std::vector<DenseVector> row_cols_;  // a_i per atom
  std::vector<DenseVector> col_cols_;  // a_j per atom
  std::vector<std::vector<double>> h_rows_;  // lower triangle incl. diagonal
  std::vector<double> f_;
  std::uint64_t flops_ = 0;
};

// H and f for a fixed atom selection ((i,j), 1-based). Atoms must be distinct.
std::pair<DenseMatrix, DenseVector> build_normal_system_2d(
    const Dictionary& dict, const DenseMatrix& y,
    const std::vector<std::pair<std::size_t, std::size_t>>& selected);

OmpResult omp2d(const Dictionary& dict, const DenseMatrix& y,
                const OmpConfig& cfg);

// Equivalence predicate: identical selection sequences, weights within tol
// (absolute-or-relative), residual-norm histories within tol relative.
bool results_equivalent(const OmpResult& a, const OmpResult& b,
                        double tol = 1e-9);

}  // namespace ompx
