#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ompx {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Linearly dependent (or zero) atom set: Cholesky hit a non-positive pivot.
class DegenerateAtomSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MemoryCapError : public std::runtime_error {
 public:
  MemoryCapError(const std::string& msg, std::size_t required_bytes)
      : std::runtime_error(msg), required_bytes(required_bytes) {}
  std::size_t required_bytes;
};

// Tracks the largest single buffer allocated by DenseMatrix/DenseVector on
// this thread. Lets tests assert structural memory bounds (e.g. that the 2D
// recovery path never materializes an m^2 x n^2 object).
namespace alloc_probe {
void reset();
std::size_t peak_block_bytes();
namespace detail {
void record(std::size_t bytes);
}
}  // namespace alloc_probe

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t len, double fill = 0.0);
  DenseVector(std::initializer_list<double> values);

  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> data_;
};

// Row-major dense matrix. Element (i,j), 0-based internally, lives at
// data[cols*i + j]. Row-major order is a hard contract: stretch() below
// relies on it to make stretch(A Z A^T) == kron(A,A) * stretch(Z).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols,
              std::initializer_list<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[cols_ * i + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[cols_ * i + j];
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }
  const double* row_ptr(std::size_t i) const { return data_.data() + cols_ * i; }
  double* row_ptr(std::size_t i) { return data_.data() + cols_ * i; }

  static DenseMatrix identity(std::size_t n);

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::string shape_str(const DenseMatrix& m);

// Products. Transpose-aware variants avoid materializing transposes.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);  // a^T * b
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);  // a * b^T
DenseVector matvec(const DenseMatrix& a, const DenseVector& v);
DenseVector matvec_t(const DenseMatrix& a, const DenseVector& v);   // a^T * v

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& v);
double frobenius_norm(const DenseMatrix& m);

DenseMatrix outer(const DenseVector& a, const DenseVector& b);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

// Row-major flattening: output position q*(i-1)+j holds M(i,j) (1-based).
DenseVector stretch(const DenseMatrix& m);
DenseMatrix unstretch(const DenseVector& v, std::size_t p, std::size_t q);

// Solves H u = f for symmetric positive definite H via Cholesky.
// H is symmetrized as (H + H^T)/2 first; symmetry beyond 1e-10 relative
// skew is rejected. A pivot <= 1e-12 * trace(H)/t raises
// DegenerateAtomSetError.
DenseVector solve_spd(const DenseMatrix& h, const DenseVector& f);

// Textual matrix format: first line "p q", then p lines of q space-separated
// decimals with 17 significant digits (round-trip exact for doubles).
void write_matrix(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& is);
void save_matrix(const std::string& path, const DenseMatrix& m);
DenseMatrix load_matrix(const std::string& path);

}  // namespace ompx
