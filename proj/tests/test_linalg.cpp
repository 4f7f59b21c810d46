#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ompx/matrix.hpp"
#include "test_util.hpp"

using namespace ompx;
using testutil::max_abs_diff;
using testutil::random_matrix;
using testutil::random_vector;

namespace {

// Independent triple-loop oracle for matmul.
DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t l = 0; l < a.cols(); ++l)
        c(i, j) += a(i, l) * b(l, j);
  return c;
}

}  // namespace

TEST_CASE("matmul identity cases") {
  const DenseMatrix m(2, 2, {1, 2, 3, 4});
  CHECK(matmul(DenseMatrix::identity(2), m) == m);
  CHECK(matmul(m, DenseMatrix::identity(2)) == m);
}

TEST_CASE("matmul 2x2 by 2x1") {
  const DenseMatrix a(2, 2, {1, 2, 3, 4});
  const DenseMatrix b(2, 1, {5, 6});
  const DenseMatrix c = matmul(a, b);
  CHECK(c == DenseMatrix(2, 1, {17, 39}));
  CHECK(c == naive_matmul(a, b));
}

TEST_CASE("matmul random against naive oracle") {
  const DenseMatrix a = random_matrix(5, 7, 11);
  const DenseMatrix b = random_matrix(7, 3, 12);
  CHECK(max_abs_diff(matmul(a, b), naive_matmul(a, b)) < 1e-13);
}

TEST_CASE("matmul shape error names both shapes") {
  const DenseMatrix a(2, 3);
  const DenseMatrix b(4, 5);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), ShapeError);
}

TEST_CASE("transpose-aware products match explicit transposes") {
  const DenseMatrix a = random_matrix(4, 6, 21);
  const DenseMatrix b = random_matrix(4, 5, 22);
  const DenseMatrix c = random_matrix(3, 6, 23);

  DenseMatrix at(6, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 6; ++j) at(j, i) = a(i, j);

  CHECK(max_abs_diff(matmul_tn(a, b), matmul(at, b)) < 1e-13);
  CHECK(max_abs_diff(matmul_nt(a, c), naive_matmul(a, [&] {
          DenseMatrix ct(6, 3);
          for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 6; ++j) ct(j, i) = c(i, j);
          return ct;
        }())) < 1e-13);

  const DenseVector v = random_vector(4, 24);
  const DenseVector w1 = matvec_t(a, v);
  const DenseVector w2 = matvec(at, v);
  for (std::size_t i = 0; i < 6; ++i) CHECK(w1[i] == doctest::Approx(w2[i]));
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(DenseMatrix(3, 4)) == 0.0);
  CHECK(frobenius_norm(DenseMatrix::identity(2)) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("frobenius norm of an outer product factorizes") {
  // ||a|| = 2, ||b|| = 3 -> ||a b^T|| = 6
  const DenseVector a{2, 0, 0};
  const DenseVector b{0, 3, 0, 0};
  CHECK(frobenius_norm(outer(a, b)) == doctest::Approx(6.0));

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DenseVector x = random_vector(6, seed);
    const DenseVector y = random_vector(9, seed + 100);
    const double lhs = frobenius_norm(outer(x, y));
    const double rhs = norm2(x) * norm2(y);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
  }
}

TEST_CASE("kron basics") {
  CHECK(kron(DenseMatrix(1, 1, {2}), DenseMatrix(1, 1, {3})) ==
        DenseMatrix(1, 1, {6}));
  CHECK(kron(DenseMatrix(1, 2, {1, 2}), DenseMatrix(1, 2, {1, 2})) ==
        DenseMatrix(1, 4, {1, 2, 2, 4}));

  const DenseMatrix m = random_matrix(2, 2, 3);
  const DenseMatrix block = kron(DenseMatrix::identity(2), m);
  CHECK(block.rows() == 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(block(i, j) == m(i, j));
      CHECK(block(2 + i, 2 + j) == m(i, j));
      CHECK(block(i, 2 + j) == 0.0);
      CHECK(block(2 + i, j) == 0.0);
    }
}

TEST_CASE("stretch follows row-major order") {
  CHECK(stretch(DenseMatrix(2, 2, {1, 2, 3, 4})) == DenseVector{1, 2, 3, 4});
  const DenseMatrix row = random_matrix(1, 7, 5);
  CHECK(stretch(row).data() == row.data());
  // stretch(a b^T) is the Kronecker column a (x) b
  CHECK(stretch(outer(DenseVector{1, 2}, DenseVector{3, 4})) ==
        DenseVector{3, 4, 6, 8});
  CHECK(stretch(outer(DenseVector{1, 2}, DenseVector{3, 4})) ==
        stretch(kron(DenseMatrix(2, 1, {1, 2}), DenseMatrix(2, 1, {3, 4}))));
}

TEST_CASE("unstretch inverts stretch") {
  CHECK(unstretch(DenseVector{1, 2, 3, 4}, 2, 2) ==
        DenseMatrix(2, 2, {1, 2, 3, 4}));
  CHECK(unstretch(DenseVector{7}, 1, 1) == DenseMatrix(1, 1, {7}));
  CHECK_THROWS_AS(unstretch(DenseVector{1, 2, 3}, 2, 2), ShapeError);

  // Bitwise round trip over all small shapes.
  std::uint64_t seed = 900;
  for (std::size_t p = 1; p <= 16; p += 3)
    for (std::size_t q = 1; q <= 16; q += 5) {
      const DenseMatrix m = random_matrix(p, q, seed++);
      CHECK(unstretch(stretch(m), p, q) == m);
    }
}

TEST_CASE("kronecker-stretch identity") {
  // stretch(A Z A^T) == kron(A, A) stretch(Z)
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t m = 2 + seed % 7, n = 2 + (seed * 3) % 7;
    const DenseMatrix a = random_matrix(m, n, seed);
    const DenseMatrix z = random_matrix(n, n, seed + 50);
    const DenseVector lhs = stretch(matmul_nt(matmul(a, z), a));
    const DenseVector rhs = matvec(kron(a, a), stretch(z));
    double diff = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i)
      diff += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
    CHECK(std::sqrt(diff) <= 1e-10 * norm2(lhs));
  }
}

TEST_CASE("solve_spd simple systems") {
  const DenseVector u1 = solve_spd(DenseMatrix::identity(3), {1, 2, 3});
  CHECK(u1 == DenseVector{1, 2, 3});

  const DenseVector u2 = solve_spd(DenseMatrix(2, 2, {2, 0, 0, 4}), {2, 8});
  CHECK(u2[0] == doctest::Approx(1.0));
  CHECK(u2[1] == doctest::Approx(2.0));
}

TEST_CASE("solve_spd rejects degenerate systems") {
  CHECK_THROWS_AS(solve_spd(DenseMatrix(2, 2), {1, 1}),
                  DegenerateAtomSetError);
  // rank-1 matrix: second pivot collapses
  const DenseMatrix rank1 = outer(DenseVector{1, 2}, DenseVector{1, 2});
  CHECK_THROWS_AS(solve_spd(rank1, {1, 1}), DegenerateAtomSetError);
}

TEST_CASE("solve_spd rejects asymmetric input") {
  CHECK_THROWS_AS(solve_spd(DenseMatrix(2, 2, {1, 5, 0, 1}), {1, 1}),
                  ShapeError);
}

TEST_CASE("solve_spd residual on random SPD systems") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t t = 1 + seed % 16;
    const DenseMatrix m = random_matrix(t, t, seed);
    DenseMatrix h = matmul_tn(m, m);
    for (std::size_t i = 0; i < t; ++i) h(i, i) += 1.0;
    const DenseVector f = random_vector(t, seed + 40);
    const DenseVector u = solve_spd(h, f);
    const DenseVector hu = matvec(h, u);
    double resid = 0.0;
    for (std::size_t i = 0; i < t; ++i)
      resid += (hu[i] - f[i]) * (hu[i] - f[i]);
    CHECK(std::sqrt(resid) <= 1e-10 * (1.0 + norm2(f)));
  }
}

TEST_CASE("text matrix format round-trips exactly") {
  const DenseMatrix m = random_matrix(3, 5, 77);
  std::stringstream ss;
  write_matrix(ss, m);
  CHECK(read_matrix(ss) == m);
}
