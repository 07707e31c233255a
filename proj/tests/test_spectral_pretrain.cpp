#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/errors.hpp"
#include "connect_later/linalg.hpp"
#include "connect_later/spectral_pretrain.hpp"
#include "test_util.hpp"

using namespace connect_later;

namespace {

PositivePairMatrix default_sp(bool swapped) {
  GraphParams p;
  p.swapped = swapped;
  return positive_pair_matrix(build_connect_later_graph(p));
}

// -sum of the k largest squared (clamped) eigenvalues of the normalized
// adjacency, computed with Eigen.
double closed_form_oracle(const PositivePairMatrix& sp, std::size_t k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(test_util::to_eigen(normalized_adjacency(sp)));
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  double loss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double l = std::max(ev(ev.size() - 1 - static_cast<Eigen::Index>(i)), 0.0);
    loss -= l * l;
  }
  return loss;
}

// Direct double sum of the objective, no shared code with spectral_loss.
double loss_oracle(const Matrix& f, const PositivePairMatrix& sp, const Vector& p_u) {
  double loss = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.rows(); ++j) {
      double ip = 0.0;
      for (std::size_t c = 0; c < f.cols(); ++c) ip += f(i, c) * f(j, c);
      loss += -2.0 * sp(i, j) * ip + p_u[i] * p_u[j] * ip * ip;
    }
  return loss;
}

Matrix random_features(std::size_t n, std::size_t k, Rng& rng, double scale = 1.0) {
  Matrix f(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) f(i, j) = rng.uniform(-scale, scale);
  return f;
}

}  // namespace

TEST_CASE("spectral_loss basics") {
  const auto sp = default_sp(true);
  const Vector p_u(8, 0.125);
  CHECK(spectral_loss(Encoder(Matrix(8, 3)), sp, p_u) == 0.0);
  Rng rng(1);
  for (int t = 0; t < 5; ++t) {
    const Matrix f = random_features(8, 3, rng);
    CHECK(spectral_loss(Encoder(f), sp, p_u) == doctest::Approx(loss_oracle(f, sp, p_u)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(spectral_loss(Encoder(Matrix(7, 2)), sp, p_u), ValidationError);
  CHECK_THROWS_AS(Encoder(Matrix(8, 0)), ValidationError);
  Matrix bad(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(Encoder{bad}, ValidationError);
}

TEST_CASE("closed form attains the eigenvalue bound") {
  for (bool swapped : {false, true}) {
    const auto sp = default_sp(swapped);
    const Vector w = sp.marginals();
    double prev = 0.0;
    for (std::size_t k = 1; k <= 8; ++k) {
      const double loss = spectral_loss(pretrain_closed_form(sp, k), sp, w);
      CHECK(std::abs(loss - closed_form_oracle(sp, k)) <= 1e-12);
      CHECK(loss <= prev + 1e-15);
      prev = loss;
    }
    // full rank: -sum of all squared eigenvalues = -||A||_F^2
    const double fro = frobenius_norm(normalized_adjacency(sp));
    CHECK(std::abs(prev + fro * fro) <= 1e-12);
  }
  CHECK_THROWS_AS(pretrain_closed_form(default_sp(true), 0), ValidationError);
  CHECK_THROWS_AS(pretrain_closed_form(default_sp(true), 9), ValidationError);
}

TEST_CASE("closed form on the scaled identity") {
  const std::size_t n = 5;
  const PositivePairMatrix sp((1.0 / n) * Matrix::identity(n));
  const Vector p_u(n, 1.0 / n);
  const Encoder e = pretrain_closed_form(sp, n);
  CHECK(spectral_loss(e, sp, p_u) == doctest::Approx(-static_cast<double>(n)).epsilon(1e-12));
  CHECK(loss_oracle(e.features(), sp, p_u) == doctest::Approx(-static_cast<double>(n)).epsilon(1e-12));
}

TEST_CASE("no encoder beats the closed form") {
  const auto sp = default_sp(true);
  const Vector w = sp.marginals();
  Rng rng(17);
  for (std::size_t k : {1, 2, 4}) {
    const double best = spectral_loss(pretrain_closed_form(sp, k), sp, w);
    for (int t = 0; t < 200; ++t) {
      const Matrix f = random_features(8, k, rng, rng.uniform(0.1, 4.0));
      CHECK(spectral_loss(Encoder(f), sp, w) >= best - 1e-12);
    }
  }
}

TEST_CASE("rotation invariance") {
  const auto sp = default_sp(true);
  const Vector w = sp.marginals();
  Rng rng(23);
  const Matrix f = random_features(8, 4, rng);
  const Matrix q = test_util::random_orthogonal(4, rng);
  CHECK(spectral_loss(Encoder(f * q), sp, w) == doctest::Approx(spectral_loss(Encoder(f), sp, w)).epsilon(1e-12));
}

TEST_CASE("k = 2 features split the graph into its two clusters") {
  const Encoder e = pretrain_closed_form(default_sp(true), 2);
  // inputs {1,4,6,8} versus {2,3,5,7}
  const std::vector<std::size_t> a{0, 3, 5, 7}, b{1, 2, 4, 6};
  const double sa = e(a[0])[1];
  CHECK(std::abs(sa) > 1e-6);
  for (std::size_t i : a) CHECK(e(i)[1] * sa > 0.0);
  for (std::size_t i : b) CHECK(e(i)[1] * sa < 0.0);
}

TEST_CASE("analytic gradient matches central differences") {
  const auto sp = default_sp(true);
  const Vector w = sp.marginals();
  Rng rng(31);
  const Matrix f = random_features(8, 3, rng);
  const Matrix g = spectral_loss_gradient(f, sp, w);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Matrix fp = f, fm = f;
      fp(i, j) += h;
      fm(i, j) -= h;
      const double fd = (loss_oracle(fp, sp, w) - loss_oracle(fm, sp, w)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g(i, j)) / std::max(std::abs(g(i, j)), 1e-3));
    }
  CHECK(worst <= 1e-5);
}

TEST_CASE("gradient descent reaches the closed-form loss") {
  for (bool swapped : {false, true}) {
    const auto sp = default_sp(swapped);
    const Vector w = sp.marginals();
    for (std::size_t k : {1, 2, 4, 8}) {
      Rng rng(1000 + k);
      const Encoder e = pretrain_gd(sp, k, {}, rng);
      CHECK(std::abs(spectral_loss(e, sp, w) - closed_form_oracle(sp, k)) <= 1e-6);
    }
  }
}

TEST_CASE("gradient descent schedule") {
  const auto sp = default_sp(true);
  GradientDescentOptions opts;
  opts.steps = 0;
  Rng rng(5), replay(5);
  const Encoder e = pretrain_gd(sp, 3, opts, rng);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(e.features()(i, j) == replay.uniform(-0.01, 0.01));

  Rng r1(9), r2(9);
  opts.steps = 100;
  CHECK(pretrain_gd(sp, 2, opts, r1).features() == pretrain_gd(sp, 2, opts, r2).features());

  opts.learning_rate = 1e4;
  opts.init_scale = 1.0;
  Rng r3(9);
  try {
    pretrain_gd(sp, 2, opts, r3);
    FAIL("expected divergence");
  } catch (const NumericalError& err) {
    CHECK(std::string(err.what()).find("step") != std::string::npos);
  }
  opts.learning_rate = 0.0;
  CHECK_THROWS_AS(pretrain_gd(sp, 2, opts, r3), ValidationError);
}
