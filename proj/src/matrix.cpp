#include "ompx/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ompx {

namespace alloc_probe {
namespace {
thread_local std::size_t g_peak_block_bytes = 0;
}
void reset() { g_peak_block_bytes = 0; }
std::size_t peak_block_bytes() { return g_peak_block_bytes; }
namespace detail {
void record(std::size_t bytes) {
  if (bytes > g_peak_block_bytes) g_peak_block_bytes = bytes;
}
}  // namespace detail
}  // namespace alloc_probe

DenseVector::DenseVector(std::size_t len, double fill) : data_(len, fill) {
  alloc_probe::detail::record(len * sizeof(double));
}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {
  alloc_probe::detail::record(data_.size() * sizeof(double));
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  alloc_probe::detail::record(data_.size() * sizeof(double));
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::initializer_list<double> values)
    : rows_(rows), cols_(cols), data_(values) {
  if (data_.size() != rows * cols) {
    throw ShapeError("DenseMatrix init list has " +
                     std::to_string(data_.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  alloc_probe::detail::record(data_.size() * sizeof(double));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string shape_str(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: shape mismatch " + shape_str(a) + " * " +
                     shape_str(b));
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row_ptr(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      const double* bl = b.row_ptr(l);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: shape mismatch " + shape_str(a) + "^T * " +
                     shape_str(b));
  }
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const double* al = a.row_ptr(l);
    const double* bl = b.row_ptr(l);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double ali = al[i];
      if (ali == 0.0) continue;
      double* ci = c.row_ptr(i);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ali * bl[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: shape mismatch " + shape_str(a) + " * " +
                     shape_str(b) + "^T");
  }
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    double* ci = c.row_ptr(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.row_ptr(j);
      double acc = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) acc += ai[l] * bj[l];
      ci[j] = acc;
    }
  }
  return c;
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& v) {
  if (a.cols() != v.size()) {
    throw ShapeError("matvec: shape mismatch " + shape_str(a) + " * vec(" +
                     std::to_string(v.size()) + ")");
  }
  DenseVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += ai[j] * v[j];
    out[i] = acc;
  }
  return out;
}

DenseVector matvec_t(const DenseMatrix& a, const DenseVector& v) {
  if (a.rows() != v.size()) {
    throw ShapeError("matvec_t: shape mismatch " + shape_str(a) + "^T * vec(" +
                     std::to_string(v.size()) + ")");
  }
  DenseVector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    const double vi = v[i];
    if (vi == 0.0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += ai[j] * vi;
  }
  return out;
}

double dot(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw ShapeError("dot: length mismatch " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * v[i];
  return std::sqrt(acc);
}

double frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc += x * x;
  return std::sqrt(acc);
}

DenseMatrix outer(const DenseVector& a, const DenseVector& b) {
  DenseMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double* mi = m.row_ptr(i);
    for (std::size_t j = 0; j < b.size(); ++j) mi[j] = a[i] * b[j];
  }
  return m;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  std::size_t rows = 0, cols = 0, total = 0;
  if (__builtin_mul_overflow(a.rows(), b.rows(), &rows) ||
      __builtin_mul_overflow(a.cols(), b.cols(), &cols) ||
      __builtin_mul_overflow(rows, cols, &total) ||
      total > std::numeric_limits<std::size_t>::max() / sizeof(double)) {
    throw ShapeError("kron: result dimensions overflow index range (" +
                     shape_str(a) + " kron " + shape_str(b) + ")");
  }
  DenseMatrix c(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      for (std::size_t s = 0; s < b.rows(); ++s) {
        const double* bs = b.row_ptr(s);
        double* cs = c.row_ptr(i * b.rows() + s) + j * b.cols();
        for (std::size_t t = 0; t < b.cols(); ++t) cs[t] = aij * bs[t];
      }
    }
  }
  return c;
}

DenseVector stretch(const DenseMatrix& m) {
  DenseVector v(m.rows() * m.cols());
  v.data() = m.data();
  return v;
}

DenseMatrix unstretch(const DenseVector& v, std::size_t p, std::size_t q) {
  if (v.size() != p * q) {
    throw ShapeError("unstretch: length " + std::to_string(v.size()) +
                     " != " + std::to_string(p) + "*" + std::to_string(q));
  }
  DenseMatrix m(p, q);
  m.data() = v.data();
  return m;
}

DenseVector solve_spd(const DenseMatrix& h, const DenseVector& f) {
  const std::size_t t = h.rows();
  if (h.cols() != t || f.size() != t) {
    throw ShapeError("solve_spd: shape mismatch " + shape_str(h) + ", vec(" +
                     std::to_string(f.size()) + ")");
  }
  if (t == 0) return DenseVector();

  double scale = 0.0;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j)
      scale = std::max(scale, std::abs(h(i, j)));
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      if (std::abs(h(i, j) - h(j, i)) > 1e-10 * (1.0 + scale)) {
        throw ShapeError("solve_spd: matrix is not symmetric at (" +
                         std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ")");
      }
    }
  }

  // Symmetrize: accumulation order in callers can leave 1-ulp asymmetry.
  DenseMatrix l(t, t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      l(i, j) = 0.5 * (h(i, j) + h(j, i));

  double trace = 0.0;
  for (std::size_t i = 0; i < t; ++i) trace += h(i, i);
  const double pivot_floor = 1e-12 * trace / static_cast<double>(t);

  for (std::size_t j = 0; j < t; ++j) {
    double d = l(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > pivot_floor)) {
      throw DegenerateAtomSetError(
          "degenerate atom set: non-positive Cholesky pivot at column " +
          std::to_string(j + 1));
    }
    d = std::sqrt(d);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < t; ++i) {
      double s = l(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }

  DenseVector u(t);
  for (std::size_t i = 0; i < t; ++i) {
    double s = f[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * u[k];
    u[i] = s / l(i, i);
  }
  for (std::size_t ii = t; ii-- > 0;) {
    double s = u[ii];
    for (std::size_t k = ii + 1; k < t; ++k) s -= l(k, ii) * u[k];
    u[ii] = s / l(ii, ii);
  }
  return u;
}

void write_matrix(std::ostream& os, const DenseMatrix& m) {
  os << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      os << (j ? " " : "") << buf;
    }
    os << "\n";
  }
}

DenseMatrix read_matrix(std::istream& is) {
  std::size_t p = 0, q = 0;
  if (!(is >> p >> q)) throw std::runtime_error("matrix read: bad header");
  DenseMatrix m(p, q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (!(is >> m(i, j))) {
        throw std::runtime_error("matrix read: truncated at row " +
                                 std::to_string(i + 1));
      }
    }
  }
  return m;
}

void save_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  write_matrix(os, m);
  if (!os) throw std::runtime_error("write failed: " + path);
}

DenseMatrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for read: " + path);
  return read_matrix(is);
}

}  // namespace ompx
