#include "ompx/recovery.hpp"

#include <cmath>
#include <cstdlib>

namespace ompx {

namespace {

std::uint64_t cholesky_flops(std::uint64_t t) {
  return t * t * t / 6 + t * t;  // factor + two triangular solves
}

// Argmax of |scores| over available atoms, flat-index scan order, strict
// comparison: ties go to the smallest flat index in both algorithms.
std::size_t argmax_abs(const std::vector<double>& scores,
                       const std::vector<char>& available) {
  std::size_t best = scores.size();
  double best_val = -1.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!available[i]) continue;
    const double v = std::abs(scores[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return best;
}

}  // namespace

DenseVector project_1d(const DenseMatrix& omega, const DenseVector& r,
                       const DenseVector& rho) {
  const std::size_t m2 = omega.rows(), n2 = omega.cols();
  if (r.size() != m2 || rho.size() != n2) {
    throw ShapeError("project_1d: shape mismatch, omega " + shape_str(omega) +
                     ", r(" + std::to_string(r.size()) + "), rho(" +
                     std::to_string(rho.size()) + ")");
  }
  // Omega^T r as row-streaming accumulation (Omega is row-major).
  DenseVector acc(n2);
  for (std::size_t i = 0; i < m2; ++i) {
    const double ri = r[i];
    if (ri == 0.0) continue;
    const double* row = omega.row_ptr(i);
    double* out = acc.data().data();
    for (std::size_t j = 0; j < n2; ++j) out[j] += row[j] * ri;
  }
  for (std::size_t j = 0; j < n2; ++j) {
    acc[j] = rho[j] == 0.0 ? 0.0 : acc[j] / rho[j];
  }
  return acc;
}

OmpResult omp1d(const DenseMatrix& omega, const DenseVector& rho,
                const DenseVector& y, const OmpConfig& cfg) {
  const std::size_t m2 = omega.rows(), n2 = omega.cols();
  if (cfg.k > n2) {
    throw ShapeError("omp1d: k = " + std::to_string(cfg.k) + " exceeds n^2 = " +
                     std::to_string(n2));
  }
  if (y.size() != m2 || rho.size() != n2) {
    throw ShapeError("omp1d: shape mismatch, omega " + shape_str(omega) +
                     ", y(" + std::to_string(y.size()) + ")");
  }

  OmpResult res;
  res.coefficients = DenseVector(n2);
  const double y_norm = norm2(y);

  std::vector<char> available(n2, 1);
  for (std::size_t i = 0; i < n2; ++i)
    if (rho[i] == 0.0) available[i] = 0;

  DenseVector r = y;
  std::vector<DenseVector> sel_cols;  // contiguous copies of selected atoms
  DenseMatrix q;                      // Omega_i^T Omega_i, grown per iteration
  DenseVector g;                      // Omega_i^T y

  for (std::size_t t = 1; t <= cfg.k; ++t) {
    if (norm2(r) <= cfg.tol * y_norm) break;

    const DenseVector proj = project_1d(omega, r, rho);
    res.flops.project += static_cast<std::uint64_t>(m2) * n2;
    const std::size_t pick = argmax_abs(proj.data(), available);
    if (pick == n2) break;  // no usable atoms left
    available[pick] = 0;

    DenseVector col(m2);
    for (std::size_t i = 0; i < m2; ++i) col[i] = omega(i, pick);
    sel_cols.push_back(std::move(col));

    // Extend Q and g (Q = Omega_i^T Omega_i, g = Omega_i^T y); prior entries
    // are copied unchanged.
    DenseMatrix q_next(t, t);
    for (std::size_t a = 0; a + 1 < t; ++a)
      for (std::size_t b = 0; b + 1 < t; ++b) q_next(a, b) = q(a, b);
    for (std::size_t a = 0; a < t; ++a) {
      const double v = dot(sel_cols[a], sel_cols[t - 1]);
      q_next(a, t - 1) = v;
      q_next(t - 1, a) = v;
    }
    q = std::move(q_next);
    DenseVector g_next(t);
    for (std::size_t a = 0; a + 1 < t; ++a) g_next[a] = g[a];
    g_next[t - 1] = dot(sel_cols[t - 1], y);
    g = std::move(g_next);
    res.flops.weights += static_cast<std::uint64_t>(t + 1) * m2;

    DenseVector u;
    try {
      u = solve_spd(q, g);
    } catch (const DegenerateAtomSetError&) {
      res.status = OmpStatus::degenerate_abort;
      break;
    }
    res.flops.weights += cholesky_flops(t);

    r = y;
    for (std::size_t a = 0; a < t; ++a) {
      const double ua = u[a];
      const DenseVector& c = sel_cols[a];
      for (std::size_t i = 0; i < m2; ++i) r[i] -= ua * c[i];
    }
    res.flops.residual += static_cast<std::uint64_t>(t) * m2;

    res.selected.push_back(pick + 1);
    res.weights = std::move(u);
    res.residual_norms.push_back(norm2(r));
    res.iterations = t;
  }

  for (std::size_t t = 0; t < res.selected.size(); ++t)
    res.coefficients[res.selected[t] - 1] = res.weights[t];
  return res;
}

DenseMatrix project_2d(const Dictionary& dict, const DenseMatrix& r) {
  if (r.rows() != dict.m() || r.cols() != dict.m()) {
    throw ShapeError("project_2d: R must be " + std::to_string(dict.m()) +
                     "x" + std::to_string(dict.m()) + ", got " + shape_str(r));
  }
  DenseMatrix out = matmul(matmul_tn(dict.A, r), dict.A);  // A^T R A
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      const double p = dict.atom_norms(i, j);
      out(i, j) = p == 0.0 ? 0.0 : out(i, j) / p;
    }
  }
  return out;
}

NormalSystem2D::NormalSystem2D(const Dictionary& dict, const DenseMatrix& y)
    : dict_(dict), y_(y) {}

void NormalSystem2D::append(std::size_t i, std::size_t j) {
  for (const auto& [pi, pj] : atoms_) {
    if (pi == i - 1 && pj == j - 1) {
      throw ShapeError("normal system: duplicate atom (" + std::to_string(i) +
                       "," + std::to_string(j) + ")");
    }
  }
  const std::size_t m = dict_.m();
  const DenseVector ai = dict_.col(i - 1);
  const DenseVector aj = dict_.col(j - 1);

  // H(t,s) = <a_it, a_is> <a_jt, a_js>  (Gram of rank-1 atoms)
  std::vector<double> h_row(atoms_.size() + 1);
  for (std::size_t s = 0; s < atoms_.size(); ++s) {
    h_row[s] = dot(ai, row_cols_[s]) * dot(aj, col_cols_[s]);
  }
  h_row.back() = dot(ai, ai) * dot(aj, aj);
  flops_ += static_cast<std::uint64_t>(atoms_.size() + 1) * 2 * m;

  // f(t) = a_i^T Y a_j
  f_.push_back(dot(ai, matvec(y_, aj)));
  flops_ += static_cast<std::uint64_t>(m) * m + m;

  atoms_.emplace_back(i - 1, j - 1);
  row_cols_.push_back(ai);
  col_cols_.push_back(aj);
  h_rows_.push_back(std::move(h_row));
}

DenseMatrix NormalSystem2D::gram() const {
  const std::size_t t = atoms_.size();
  DenseMatrix h(t, t);
  for (std::size_t a = 0; a < t; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      h(a, b) = h_rows_[a][b];
      h(b, a) = h_rows_[a][b];
    }
  }
  return h;
}

DenseVector NormalSystem2D::rhs() const {
  DenseVector f(f_.size());
  f.data() = f_;
  return f;
}

std::pair<DenseMatrix, DenseVector> build_normal_system_2d(
    const Dictionary& dict, const DenseMatrix& y,
    const std::vector<std::pair<std::size_t, std::size_t>>& selected) {
  NormalSystem2D ns(dict, y);
  for (const auto& [i, j] : selected) ns.append(i, j);
  return {ns.gram(), ns.rhs()};
}

OmpResult omp2d(const Dictionary& dict, const DenseMatrix& y,
                const OmpConfig& cfg) {
  const std::size_t m = dict.m(), n = dict.n();
  if (cfg.k > n * n) {
    throw ShapeError("omp2d: k = " + std::to_string(cfg.k) + " exceeds n^2 = " +
                     std::to_string(n * n));
  }
  if (y.rows() != m || y.cols() != m) {
    throw ShapeError("omp2d: Y must be " + std::to_string(m) + "x" +
                     std::to_string(m) + ", got " + shape_str(y));
  }

  OmpResult res;
  res.coefficients = DenseVector(n * n);
  const double y_norm = frobenius_norm(y);

  std::vector<char> available(n * n, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dict.atom_norms(i, j) == 0.0) available[n * i + j] = 0;

  DenseMatrix r = y;
  NormalSystem2D ns(dict, y);

  for (std::size_t t = 1; t <= cfg.k; ++t) {
    if (frobenius_norm(r) <= cfg.tol * y_norm) break;

    const DenseMatrix proj = project_2d(dict, r);
    res.flops.project += static_cast<std::uint64_t>(m) * m * n +
                         static_cast<std::uint64_t>(m) * n * n;
    const std::size_t pick = argmax_abs(proj.data(), available);
    if (pick == n * n) break;
    available[pick] = 0;
    const std::size_t pi = pick / n, pj = pick % n;

    const std::uint64_t ns_flops_before = ns.flops();
    ns.append(pi + 1, pj + 1);
    res.flops.weights += ns.flops() - ns_flops_before;

    DenseVector u;
    try {
      u = solve_spd(ns.gram(), ns.rhs());
    } catch (const DegenerateAtomSetError&) {
      res.status = OmpStatus::degenerate_abort;
      break;
    }
    res.flops.weights += cholesky_flops(t);

    // R = Y - sum u_t' B_{i_t', j_t'}, recomputed from Y each iteration.
    r = y;
    for (std::size_t a = 0; a < t; ++a) {
      const DenseVector& ai = ns.row_col(a);
      const DenseVector& aj = ns.col_col(a);
      const double ua = u[a];
      for (std::size_t row = 0; row < m; ++row) {
        const double scale = ua * ai[row];
        double* rr = r.row_ptr(row);
        for (std::size_t col = 0; col < m; ++col) rr[col] -= scale * aj[col];
      }
    }
    res.flops.residual += static_cast<std::uint64_t>(t) * m * m;

    res.selected.push_back(pick + 1);
    res.weights = std::move(u);
    res.residual_norms.push_back(frobenius_norm(r));
    res.iterations = t;
  }

  for (std::size_t t = 0; t < res.selected.size(); ++t)
    res.coefficients[res.selected[t] - 1] = res.weights[t];
  return res;
}

bool results_equivalent(const OmpResult& a, const OmpResult& b, double tol) {
  if (a.selected != b.selected) return false;
  if (a.weights.size() != b.weights.size()) return false;
  for (std::size_t t = 0; t < a.weights.size(); ++t) {
    const double diff = std::abs(a.weights[t] - b.weights[t]);
    const double scale = std::max(std::abs(a.weights[t]), std::abs(b.weights[t]));
    if (diff > tol * std::max(1.0, scale)) return false;
  }
  if (a.residual_norms.size() != b.residual_norms.size()) return false;
  for (std::size_t t = 0; t < a.residual_norms.size(); ++t) {
    const double diff = std::abs(a.residual_norms[t] - b.residual_norms[t]);
    const double scale =
        std::max(a.residual_norms[t], b.residual_norms[t]);
    if (diff > tol * std::max(1.0, scale)) return false;
  }
  return true;
}

}  // namespace ompx
