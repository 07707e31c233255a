#include "connect_later/spectral_pretrain.hpp"

#include <cmath>
#include <string>

#include "connect_later/errors.hpp"
#include "connect_later/linalg.hpp"

namespace connect_later {

namespace {

void check_dims(std::size_t n, const PositivePairMatrix& sp, std::span<const double> p_u) {
  if (sp.size() != n || p_u.size() != n) throw ValidationError("spectral_loss: dimension mismatch");
}

// F^T diag(p) F
Matrix weighted_gram(const Matrix& f, std::span<const double> p) {
  const std::size_t k = f.cols();
  Matrix g(k, k);
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) g(a, b) += p[i] * f(i, a) * f(i, b);
  return g;
}

}  // namespace

Encoder::Encoder(Matrix features) : features_(std::move(features)) {
  if (features_.cols() == 0 || features_.rows() == 0) throw ValidationError("Encoder: feature dimension must be >= 1");
  if (!features_.all_finite()) throw ValidationError("Encoder: non-finite features");
}

double spectral_loss(const Encoder& e, const PositivePairMatrix& sp, std::span<const double> p_u) {
  const std::size_t n = e.size();
  check_dims(n, sp, p_u);
  double attract = 0.0;
  double repel = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double ip = dot(e(i), e(j));
      attract += sp(i, j) * ip;
      repel += p_u[i] * p_u[j] * ip * ip;
    }
  return -2.0 * attract + repel;
}

Matrix spectral_loss_gradient(const Matrix& features, const PositivePairMatrix& sp, std::span<const double> p_u) {
  check_dims(features.rows(), sp, p_u);
  const Matrix gram = weighted_gram(features, p_u);
  Matrix grad = -4.0 * (sp.matrix() * features);
  const Matrix pf_gram = features * gram;
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t a = 0; a < features.cols(); ++a) grad(i, a) += 4.0 * p_u[i] * pf_gram(i, a);
  return grad;
}

Encoder pretrain_closed_form(const PositivePairMatrix& sp, std::size_t k) {
  const std::size_t n = sp.size();
  if (k < 1 || k > n) throw ValidationError("pretrain_closed_form: k must lie in [1, " + std::to_string(n) + "]");
  const Matrix adj = normalized_adjacency(sp);
  const EigenDecomposition eig = sym_eig(adj);
  const Vector w = sp.marginals();

  Matrix f(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    const double scale = std::sqrt(std::max(eig.values[j], 0.0));
    for (std::size_t i = 0; i < n; ++i) f(i, j) = scale * eig.vectors(i, j) / std::sqrt(w[i]);
  }
  return Encoder(std::move(f));
}

Encoder pretrain_gd(const PositivePairMatrix& sp, std::size_t k, const GradientDescentOptions& opts, Rng& rng) {
  const std::size_t n = sp.size();
  if (k < 1) throw ValidationError("pretrain_gd: k must be >= 1");
  if (!(opts.learning_rate > 0.0)) throw ValidationError("pretrain_gd: learning rate must be positive");
  const Vector w = sp.marginals();

  Matrix f(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) f(i, j) = rng.uniform(-opts.init_scale, opts.init_scale);

  for (std::size_t step = 0; step < opts.steps; ++step) {
    f -= opts.learning_rate * spectral_loss_gradient(f, sp, w);
    if (!f.all_finite()) throw NumericalError("pretrain_gd: diverged at step " + std::to_string(step + 1));
  }
  return Encoder(std::move(f));
}

}  // namespace connect_later
