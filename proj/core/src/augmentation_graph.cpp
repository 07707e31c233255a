#include "connect_later/augmentation_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "connect_later/errors.hpp"

namespace connect_later {

namespace {

using Edge = std::pair<int, int>;  // 1-based node ids

constexpr std::array<Edge, 4> kBetaEdges{{{1, 2}, {3, 4}, {5, 6}, {7, 8}}};

// Aligned kernel.
constexpr std::array<Edge, 8> kAlignedAlpha{{{1, 3}, {3, 5}, {5, 7}, {2, 4}, {4, 6}, {6, 8}, {1, 7}, {2, 8}}};
constexpr std::array<Edge, 8> kAlignedGamma{{{1, 4}, {2, 3}, {3, 6}, {4, 5}, {5, 8}, {6, 7}, {1, 8}, {2, 7}}};

// Misaligned kernel: nodes 1 and 2 exchange their alpha and gamma partners.
constexpr std::array<Edge, 8> kSwappedAlpha{{{1, 4}, {3, 5}, {5, 7}, {2, 3}, {4, 6}, {6, 8}, {1, 8}, {2, 7}}};
constexpr std::array<Edge, 8> kSwappedAlphaLiteral{{{1, 4}, {3, 5}, {5, 7}, {2, 5}, {4, 6}, {6, 8}, {1, 8}, {2, 7}}};
constexpr std::array<Edge, 8> kSwappedGamma{{{1, 3}, {2, 4}, {3, 6}, {4, 5}, {5, 8}, {6, 7}, {1, 7}, {2, 8}}};

constexpr double kRowTol = 1e-12;

template <std::size_t N>
void set_edges(Matrix& a, const std::array<Edge, N>& edges, double w) {
  for (auto [i, j] : edges) {
    a(i - 1, j - 1) = w;
    a(j - 1, i - 1) = w;
  }
}

}  // namespace

void GraphParams::validate() const {
  for (auto [name, v] : {std::pair{"rho", rho}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}}) {
    if (!(v > 0.0 && v < 1.0)) throw ValidationError(std::string("GraphParams: ") + name + " must lie in (0, 1)");
  }
  if (!(rho > std::max(alpha, beta))) throw ValidationError("GraphParams: requires rho > max(alpha, beta)");
  if (!(std::min(alpha, beta) > gamma)) throw ValidationError("GraphParams: requires min(alpha, beta) > gamma");
  if (std::abs(rho + 2.0 * alpha + beta + 2.0 * gamma - 1.0) > kRowTol)
    throw ValidationError("GraphParams: requires rho + 2 alpha + beta + 2 gamma = 1");
}

AugmentationGraph::AugmentationGraph(std::vector<Label> class_of, std::vector<Domain> domain_of, Matrix a_pre,
                                     Vector p_u)
    : class_of_(std::move(class_of)), domain_of_(std::move(domain_of)), a_pre_(std::move(a_pre)), p_u_(std::move(p_u)) {
  const std::size_t n = class_of_.size();
  if (n == 0) throw ValidationError("AugmentationGraph: empty node set");
  if (domain_of_.size() != n || a_pre_.rows() != n || a_pre_.cols() != n || p_u_.size() != n)
    throw ValidationError("AugmentationGraph: inconsistent sizes");
  if (!a_pre_.all_finite()) throw ValidationError("AugmentationGraph: kernel has non-finite entries");

  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a_pre_(i, j) < 0.0) throw ValidationError("AugmentationGraph: negative kernel entry in row " + std::to_string(i + 1));
      row += a_pre_(i, j);
    }
    if (std::abs(row - 1.0) > kRowTol)
      throw ValidationError("AugmentationGraph: kernel row " + std::to_string(i + 1) + " sums to " + std::to_string(row));
  }

  double total = 0.0;
  for (double p : p_u_) {
    if (!(p >= 0.0)) throw ValidationError("AugmentationGraph: p_u has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kRowTol) throw ValidationError("AugmentationGraph: p_u does not sum to 1");

  const bool has_source = std::find(domain_of_.begin(), domain_of_.end(), Domain::source) != domain_of_.end();
  const bool has_target = std::find(domain_of_.begin(), domain_of_.end(), Domain::target) != domain_of_.end();
  if (!has_source || !has_target) throw ValidationError("AugmentationGraph: need at least one source and one target node");

  const std::set<Label> labels(class_of_.begin(), class_of_.end());
  num_classes_ = *labels.rbegin();
  if (*labels.begin() != 1 || static_cast<int>(labels.size()) != num_classes_)
    throw ValidationError("AugmentationGraph: class labels must cover 1..r");
}

std::vector<std::size_t> AugmentationGraph::source_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (domain_of_[i] == Domain::source) out.push_back(i);
  return out;
}

std::vector<std::size_t> AugmentationGraph::target_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (domain_of_[i] == Domain::target) out.push_back(i);
  return out;
}

bool AugmentationGraph::same_layout(const AugmentationGraph& other) const {
  return class_of_ == other.class_of_ && domain_of_ == other.domain_of_;
}

std::vector<Label> connect_later_classes() { return {1, 2, 1, 2, 1, 2, 1, 2}; }

std::vector<Domain> connect_later_domains() {
  std::vector<Domain> d(8, Domain::target);
  d[0] = d[1] = Domain::source;
  return d;
}

Matrix connect_later_kernel(const GraphParams& p) {
  Matrix a(8, 8);
  for (std::size_t i = 0; i < 8; ++i) a(i, i) = p.rho;
  set_edges(a, kBetaEdges, p.beta);
  if (!p.swapped) {
    set_edges(a, kAlignedAlpha, p.alpha);
    set_edges(a, kAlignedGamma, p.gamma);
  } else {
    // Gamma first so a literal {2,5} alpha edge is not overwritten.
    set_edges(a, kSwappedGamma, p.gamma);
    if (p.literal_edge_2_5)
      set_edges(a, kSwappedAlphaLiteral, p.alpha);
    else
      set_edges(a, kSwappedAlpha, p.alpha);
  }
  return a;
}

AugmentationGraph build_connect_later_graph(const GraphParams& p) {
  p.validate();
  return AugmentationGraph(connect_later_classes(), connect_later_domains(), connect_later_kernel(p), Vector(8, 1.0 / 8.0));
}

AugmentationGraph interpolate_graphs(const AugmentationGraph& g0, const AugmentationGraph& g1, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("interpolate_graphs: s must lie in [0, 1]");
  if (g0.size() != g1.size() || !g0.same_layout(g1))
    throw ValidationError("interpolate_graphs: graphs differ in nodes, labels or domains");
  if (s == 0.0) return g0;
  if (s == 1.0) return g1;
  return AugmentationGraph(g0.classes(), g0.domains(), (1.0 - s) * g0.a_pre() + s * g1.a_pre(), g0.p_u());
}

PositivePairMatrix::PositivePairMatrix(Matrix s_plus) : s_plus_(std::move(s_plus)) {
  if (!s_plus_.square()) throw ValidationError("PositivePairMatrix: not square");
  if (!s_plus_.all_finite()) throw ValidationError("PositivePairMatrix: non-finite entries");
  if (asymmetry(s_plus_) > 1e-12) throw ValidationError("PositivePairMatrix: not symmetric");
  for (double v : s_plus_.data())
    if (v < 0.0) throw ValidationError("PositivePairMatrix: negative entry");
  if (std::abs(s_plus_.sum() - 1.0) > 1e-10) throw ValidationError("PositivePairMatrix: entries do not sum to 1");
}

Vector PositivePairMatrix::marginals() const {
  Vector w(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (double v : s_plus_.row(i)) w[i] += v;
  return w;
}

PositivePairMatrix positive_pair_matrix(const AugmentationGraph& g) {
  const std::size_t n = g.size();
  const Matrix& a = g.a_pre();
  Matrix s(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pk = g.p_u()[k];
    if (pk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = pk * a(k, i);
      if (wi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) s(i, j) += wi * a(k, j);
    }
  }
  // Exact symmetry regardless of summation order.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s(i, j) = s(j, i);
  return PositivePairMatrix(std::move(s));
}

Matrix normalized_adjacency(const PositivePairMatrix& sp) {
  const Vector w = sp.marginals();
  const std::size_t n = sp.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(w[i] > 0.0)) throw ValidationError("normalized_adjacency: node " + std::to_string(i + 1) + " is isolated");
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = sp(i, j) / std::sqrt(w[i] * w[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i);
  return a;
}

}  // namespace connect_later
