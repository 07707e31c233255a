#pragma once

#include <cstddef>
#include <vector>

#include "connect_later/matrix.hpp"

namespace connect_later {

enum class Domain { source, target };

using Label = int;  // class labels are 1..r

// Edge probabilities of the generic augmentation kernel on the 8-node
// construction: rho for self loops, alpha for same-class cross edges, beta for
// different-class pairs inside a column, gamma for the remaining edges.
struct GraphParams {
  double rho = 0.4;
  double alpha = 0.2;
  double beta = 0.1;
  double gamma = 0.05;
  // false: aligned kernel (nodes 1 and 2 connect to their own class in the
  // target). true: misaligned kernel with the alpha/gamma edges of nodes 1
  // and 2 exchanged.
  bool swapped = true;
  // Reproduces the misaligned edge list verbatim, including its {2,5} alpha
  // edge, instead of the symmetric {2,3}. Not row-stochastic.
  bool literal_edge_2_5 = false;

  // Throws ValidationError naming the first failed constraint.
  void validate() const;
};

// A finite input space with labels, domains and a row-stochastic generic
// augmentation kernel (row i is A_pre(. | i)). Immutable after construction.
class AugmentationGraph {
 public:
  AugmentationGraph(std::vector<Label> class_of, std::vector<Domain> domain_of, Matrix a_pre, Vector p_u);

  std::size_t size() const { return class_of_.size(); }
  int num_classes() const { return num_classes_; }
  Label class_of(std::size_t node) const { return class_of_[node]; }
  Domain domain_of(std::size_t node) const { return domain_of_[node]; }
  const std::vector<Label>& classes() const { return class_of_; }
  const std::vector<Domain>& domains() const { return domain_of_; }
  const Matrix& a_pre() const { return a_pre_; }
  const Vector& p_u() const { return p_u_; }

  std::vector<std::size_t> source_nodes() const;
  std::vector<std::size_t> target_nodes() const;

  // Same labels and domains as `other` (shape check for interpolation).
  bool same_layout(const AugmentationGraph& other) const;

 private:
  std::vector<Label> class_of_;
  std::vector<Domain> domain_of_;
  Matrix a_pre_;
  Vector p_u_;
  int num_classes_ = 0;
};

// Node order is 0-based here; node i corresponds to input i+1 of the
// construction. Class 1 holds the odd inputs, class 2 the even ones; the
// source domain is inputs {1, 2}.
std::vector<Label> connect_later_classes();
std::vector<Domain> connect_later_domains();

// Raw kernel for the 8-node construction, without validation. Used to inspect
// the literal edge list.
Matrix connect_later_kernel(const GraphParams& p);

AugmentationGraph build_connect_later_graph(const GraphParams& p);

// (1-s) g0 + s g1 on the kernels; labels, domains and p_u come from g0.
AugmentationGraph interpolate_graphs(const AugmentationGraph& g0, const AugmentationGraph& g1, double s);

// Symmetric distribution over positive pairs:
// s_plus(i,j) = sum_k p_u(k) a_pre(k,i) a_pre(k,j).
class PositivePairMatrix {
 public:
  explicit PositivePairMatrix(Matrix s_plus);

  const Matrix& matrix() const { return s_plus_; }
  std::size_t size() const { return s_plus_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return s_plus_(i, j); }
  // w_i = sum_j s_plus(i,j)
  Vector marginals() const;

 private:
  Matrix s_plus_;
};

PositivePairMatrix positive_pair_matrix(const AugmentationGraph& g);

// A(i,j) = s_plus(i,j) / sqrt(w_i w_j). Throws ValidationError naming an
// isolated node when a marginal is zero.
Matrix normalized_adjacency(const PositivePairMatrix& sp);

}  // namespace connect_later
