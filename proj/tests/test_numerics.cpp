#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "connect_later/errors.hpp"
#include "connect_later/linalg.hpp"
#include "connect_later/matrix.hpp"
#include "connect_later/rng.hpp"
#include "test_util.hpp"

using namespace connect_later;
using test_util::random_orthogonal;
using test_util::random_spd;
using test_util::random_symmetric;
using test_util::to_eigen;

namespace {

Matrix reconstruct(const EigenDecomposition& e) {
  const std::size_t n = e.values.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
  return e.vectors * d * e.vectors.transpose();
}

}  // namespace

TEST_CASE("matrix basics") {
  const Matrix a{{1, 2, 3}, {4, 5, 6}};
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a.transpose()(2, 1) == 6);
  CHECK(a.sum() == 21);
  const Matrix p = a * a.transpose();
  CHECK(p == Matrix{{14, 32}, {32, 77}});
  CHECK(Matrix::identity(3).trace() == 3);
  CHECK(max_abs_diff(a + a, 2.0 * a) == 0.0);
  const Vector y = a * Vector{1, 0, -1};
  CHECK(y == Vector{-2, -2});
  CHECK(asymmetry(Matrix{{1, 2}, {2.5, 1}}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), ValidationError);
  CHECK_THROWS_AS(a * a, ValidationError);
}

TEST_CASE("sym_eig small cases") {
  SUBCASE("identity") {
    const auto e = sym_eig(Matrix::identity(2));
    CHECK(e.values == Vector{1.0, 1.0});
  }
  SUBCASE("2x2") {
    const auto e = sym_eig(Matrix{{2, 1}, {1, 2}});
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(e.vectors(0, 0)) - r) < 1e-12);
    CHECK(std::abs(e.vectors(0, 0) - e.vectors(1, 0)) < 1e-12);
    CHECK(std::abs(e.vectors(0, 1) + e.vectors(1, 1)) < 1e-12);
  }
  SUBCASE("non-symmetric input") { CHECK_THROWS_AS(sym_eig(Matrix{{1, 2}, {0, 1}}), ValidationError); }
  SUBCASE("non-square input") { CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), ValidationError); }
  SUBCASE("sweep cap") {
    Rng rng(3);
    CHECK_THROWS_AS(sym_eig(random_symmetric(8, rng), 1e-10, JacobiOptions{1e-14, 1}), NumericalError);
  }
}

TEST_CASE("sym_eig against Eigen on random symmetric matrices") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const Matrix m = random_symmetric(n, rng);
    const auto e = sym_eig(m);

    CHECK(std::is_sorted(e.values.rbegin(), e.values.rend()));
    CHECK(max_abs_diff(reconstruct(e), m) <= 1e-8);
    CHECK(max_abs_diff(e.vectors.transpose() * e.vectors, Matrix::identity(n)) <= 1e-8);
    CHECK(std::abs(std::accumulate(e.values.begin(), e.values.end(), 0.0) - m.trace()) <= 1e-8);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(m));
    Eigen::VectorXd ref = oracle.eigenvalues();  // ascending
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - ref(n - 1 - i)) <= 1e-10);
  }
}

TEST_CASE("sym_eig rotation invariance and permutation equivariance") {
  Rng rng(7);
  const std::size_t n = 8;
  const Matrix m = random_symmetric(n, rng);
  const auto e = sym_eig(m);

  const Matrix q = random_orthogonal(n, rng);
  const auto rotated = sym_eig(q.transpose() * m * q);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(rotated.values[i] - e.values[i]) <= 1e-10);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix pm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pm(i, j) = m(perm[i], perm[j]);
  const auto permuted = sym_eig(pm);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(permuted.values[i] - e.values[i]) <= 1e-10);
  // Eigenvectors with simple eigenvalues are permuted copies, up to sign.
  for (std::size_t j = 0; j < n; ++j) {
    double same = 0.0, flipped = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      same = std::max(same, std::abs(permuted.vectors(i, j) - e.vectors(perm[i], j)));
      flipped = std::max(flipped, std::abs(permuted.vectors(i, j) + e.vectors(perm[i], j)));
    }
    CHECK(std::min(same, flipped) <= 1e-8);
  }
}

TEST_CASE("sym_eig repeated eigenvalues") {
  // diag(2, 2, 1) rotated: the 2-eigenspace is degenerate.
  Rng rng(11);
  const Matrix q = random_orthogonal(3, rng);
  const Matrix d{{2, 0, 0}, {0, 2, 0}, {0, 0, 1}};
  const Matrix m = q * d * q.transpose();
  const auto e = sym_eig(m, 1e-9);
  CHECK(e.values[0] == doctest::Approx(2.0));
  CHECK(e.values[1] == doctest::Approx(2.0));
  CHECK(e.values[2] == doctest::Approx(1.0));
  CHECK(max_abs_diff(reconstruct(e), m) <= 1e-8);
}

TEST_CASE("cholesky_solve") {
  SUBCASE("identity") {
    const Vector x = cholesky_solve(Matrix::identity(2), Vector{3, -1});
    CHECK(x == Vector{3, -1});
  }
  SUBCASE("diagonal") {
    const Vector x = cholesky_solve(Matrix{{4, 0}, {0, 9}}, Vector{2, 3});
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("indefinite names the pivot") {
    try {
      cholesky_solve(Matrix{{1, 2}, {2, 1}}, Vector{1, 1});
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
  }
  SUBCASE("non-symmetric") { CHECK_THROWS_AS(cholesky_solve(Matrix{{2, 1}, {0, 2}}, Vector{1, 1}), ValidationError); }
  SUBCASE("size mismatch") { CHECK_THROWS_AS(cholesky_solve(Matrix::identity(2), Vector{1, 1, 1}), ValidationError); }
}

TEST_CASE("cholesky_solve residual and agreement with eigen-based solve") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_spd(8, rng);
    Vector b(8);
    for (double& v : b) v = rng.normal();
    const Vector x = cholesky_solve(a, b);
    const Vector ax = a * x;
    double resid = 0.0;
    for (std::size_t i = 0; i < 8; ++i) resid = std::max(resid, std::abs(ax[i] - b[i]));
    CHECK(resid <= 1e-8 * max_abs(b));

    // x = V diag(1/l) V^T b
    const auto e = sym_eig(a);
    Vector x_eig(8, 0.0);
    for (std::size_t j = 0; j < 8; ++j) {
      const Vector v = e.vectors.col(j);
      const double c = dot(v, b) / e.values[j];
      for (std::size_t i = 0; i < 8; ++i) x_eig[i] += c * v[i];
    }
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(x[i] - x_eig[i]) <= 1e-6);

    const double logdet = Cholesky(a).log_determinant();
    double ref = 0.0;
    for (double l : e.values) ref += std::log(l);
    CHECK(logdet == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("solve_right_spd") {
  Rng rng(9);
  const Matrix a = random_spd(5, rng);
  Matrix b(2, 5);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 5; ++j) b(i, j) = rng.normal();
  const Matrix x = solve_right_spd(b, a);
  CHECK(max_abs_diff(x * a, b) <= 1e-10);
}

TEST_CASE("rng determinism and splitting") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(123);
  c.next_u64();
  CHECK(c.split("x").next_u64() == Rng(123).split("x").next_u64());
  CHECK(Rng(123).split("x").next_u64() != Rng(123).split("y").next_u64());
  CHECK(Rng(123).split(0).next_u64() != Rng(123).split(1).next_u64());
  CHECK(Rng(123).split(0).next_u64() != Rng(124).split(0).next_u64());

  Rng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("rng distribution moments") {
  Rng rng(2024);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    hits += rng.bernoulli(0.3);
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(static_cast<double>(hits) / n - 0.3) < 0.005);
}

TEST_CASE("loguniform") {
  Rng rng(77);
  CHECK(loguniform(rng, 2.0, 2.0) == 2.0);
  CHECK_THROWS_AS(loguniform(rng, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(loguniform(rng, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(loguniform(rng, 2.0, 1.0), ValidationError);

  const int n = 100000;
  double mean_log = 0.0;
  int below_half = 0;
  for (int i = 0; i < n; ++i) {
    const double x = loguniform(rng, 1.0, std::exp(1.0));
    CHECK((x >= 1.0 && x <= std::exp(1.0)));
    mean_log += std::log(x);
    below_half += std::log(x) < 0.5;
  }
  CHECK(std::abs(mean_log / n - 0.5) <= 0.01);
  CHECK(std::abs(static_cast<double>(below_half) / n - 0.5) <= 0.01);
}
