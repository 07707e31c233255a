#pragma once

#include <cstddef>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/matrix.hpp"
#include "connect_later/rng.hpp"

namespace connect_later {

// Feature table of a finite-input encoder: row i is phi(i) in R^k.
class Encoder {
 public:
  explicit Encoder(Matrix features);

  std::size_t size() const { return features_.rows(); }
  std::size_t dim() const { return features_.cols(); }
  const Matrix& features() const { return features_; }
  std::span<const double> operator()(std::size_t node) const { return features_.row(node); }

 private:
  Matrix features_;
};

// -2 sum_ij s+(i,j) <phi_i, phi_j> + sum_ij p_u(i) p_u(j) <phi_i, phi_j>^2
double spectral_loss(const Encoder& e, const PositivePairMatrix& sp, std::span<const double> p_u);

// Gradient of spectral_loss with respect to the feature table.
Matrix spectral_loss_gradient(const Matrix& features, const PositivePairMatrix& sp, std::span<const double> p_u);

// Global minimizer of spectral_loss in dimension k when the positive-pair
// marginals equal p_u: phi(i) = w_i^{-1/2} [sqrt(max(l_j, 0)) v_j(i)]_{j<k}
// over the top-k eigenpairs of the normalized adjacency.
Encoder pretrain_closed_form(const PositivePairMatrix& sp, std::size_t k);

struct GradientDescentOptions {
  std::size_t steps = 20000;
  double learning_rate = 0.1;
  double init_scale = 0.01;  // entries start uniform in [-init_scale, init_scale]
};

// Full-batch gradient descent on spectral_loss with p_u taken as the
// positive-pair marginals. Throws NumericalError with the step index if the
// loss becomes non-finite.
Encoder pretrain_gd(const PositivePairMatrix& sp, std::size_t k, const GradientDescentOptions& opts, Rng& rng);

}  // namespace connect_later
