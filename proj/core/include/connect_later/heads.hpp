#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/matrix.hpp"
#include "connect_later/spectral_pretrain.hpp"

namespace connect_later {

// Fine-tuning augmentation over graph nodes: row x is A_ft(. | x).
class FtAugmentation {
 public:
  explicit FtAugmentation(Matrix kernel);
  static FtAugmentation identity(std::size_t n);

  std::size_t size() const { return kernel_.rows(); }
  const Matrix& kernel() const { return kernel_; }
  double operator()(std::size_t from, std::size_t to) const { return kernel_(from, to); }

 private:
  Matrix kernel_;
};

inline constexpr double kDefaultRidge = 1e-4;

// Ridge linear head B in R^{r x k}.
struct LinearProbe {
  Matrix b;
  double eta = kDefaultRidge;
};

struct ProbeMoments {
  Matrix feature_gram;   // E[phi(x') phi(x')^T]
  Matrix label_feature;  // E[y_x phi(x')^T], y one-hot in R^r
};

// Second moments of (augmented feature, one-hot label) under P_S uniform over
// the source nodes and x' ~ aug(. | x).
ProbeMoments probe_moments(const Encoder& e, const AugmentationGraph& g, const FtAugmentation& aug);

// Exact minimizer of E||B phi(x') - y_x||^2 + eta ||B||_F^2:
// B = M_yphi (M_phiphi + eta I)^{-1}.
LinearProbe fit_linear_probe(const Encoder& e, const AugmentationGraph& g, const FtAugmentation& aug,
                             double eta = kDefaultRidge);

// Scores within this relative distance of the maximum count as tied.
inline constexpr double kScoreTieTolerance = 1e-9;

// argmax_i (B phi(x))_i as a 1-based label; ties go to the smaller label.
Label classify(const LinearProbe& p, const Encoder& e, std::size_t node);

using Predictor = std::function<Label(std::size_t)>;

// Fraction of target nodes (uniform P_T) whose prediction differs from the
// true class.
double target_error(const Predictor& predict, const AugmentationGraph& g);

double probe_target_error(const LinearProbe& p, const Encoder& e, const AugmentationGraph& g);

enum class NodeStatus { forced, tied, free };

struct NodeVerdict {
  NodeStatus status = NodeStatus::free;
  std::vector<Label> labels;  // forced: one label; tied: the tied set; free: empty
  std::vector<double> votes;  // indexed by label - 1
};

// Characterizes the set of 0-1 ERM minimizers of a tabular classifier
// trained on augmented source data.
struct ErmMinimizerSet {
  std::vector<NodeVerdict> nodes;
  double min_target_error = 0.0;
  double max_target_error = 0.0;

  std::vector<std::size_t> nodes_with(NodeStatus s) const;
};

ErmMinimizerSet erm_minimizers(const AugmentationGraph& g, const FtAugmentation& aug);

}  // namespace connect_later
