#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/rng.hpp"

namespace connect_later {

// Average positive-pair weights by (class, domain) relation:
//   rho   same class, same domain
//   alpha same class, different domain
//   beta  different class, same domain
//   gamma different class, different domain
struct ConnectivityReport {
  double rho = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double ratio_alpha_gamma = 0.0;
  double ratio_beta_gamma = 0.0;
  bool condition_satisfied = false;
};

enum class PairAveraging {
  all_pairs,     // every unordered distinct pair in the category
  nonzero_only,  // only pairs with positive weight
};

// Throws ValidationError naming an empty category.
ConnectivityReport exact_connectivity(const Matrix& edge_weights, const AugmentationGraph& g,
                                      PairAveraging mode = PairAveraging::all_pairs);
ConnectivityReport exact_connectivity(const PositivePairMatrix& sp, const AugmentationGraph& g,
                                      PairAveraging mode = PairAveraging::all_pairs);

struct TransferVerdict {
  bool satisfied = false;
  double ratio_alpha_gamma = 0.0;
  double ratio_beta_gamma = 0.0;
};

// alpha > gamma and beta > gamma. Throws ValidationError when gamma <= 0.
TransferVerdict check_transfer_condition(double alpha, double beta, double gamma);

struct LabeledSample {
  Vector point;
  int label = 0;  // 0 or 1
};

struct LogisticOptions {
  std::size_t steps = 500;
  double learning_rate = 1.0;
};

// Binary logistic regression with an intercept.
class LogisticModel {
 public:
  LogisticModel() = default;
  LogisticModel(Vector weights, double bias) : weights_(std::move(weights)), bias_(bias) {}

  double probability(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return probability(x) >= 0.5 ? 1 : 0; }
  const Vector& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  Vector weights_;
  double bias_ = 0.0;
};

struct LogisticFit {
  LogisticModel model;
  std::vector<double> loss_history;  // loss after each accepted step, starting at the initial loss
};

// Mean binary cross-entropy of (weights, bias) on samples; params = [w..., b].
double logistic_loss(std::span<const double> params, const std::vector<LabeledSample>& samples);
Vector logistic_gradient(std::span<const double> params, const std::vector<LabeledSample>& samples);

// Full-batch gradient descent from zero; a step that would raise the loss is
// retried with half the learning rate, so the loss is non-increasing.
// Throws ValidationError if only one label is present.
LogisticFit train_logistic(const std::vector<LabeledSample>& samples, const LogisticOptions& opts = {});

double classification_error(const LogisticModel& m, const std::vector<LabeledSample>& samples);

using PointSampler = std::function<Vector(Rng&)>;

struct EmpiricalConnectivityOptions {
  std::size_t n_train = 1000;  // per sampler
  std::size_t n_test = 10000;  // per sampler
  LogisticOptions logistic;
};

// Held-out error of a classifier trained to tell the two samplers apart.
double empirical_connectivity(const PointSampler& a, const PointSampler& b, const EmpiricalConnectivityOptions& opts,
                              Rng& rng);

// Bayes error between N(0, 1) and N(separation, 1) with equal priors: Phi(-|d|/2).
double gaussian_bayes_error(double separation);

}  // namespace connect_later
