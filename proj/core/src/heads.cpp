#include "connect_later/heads.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "connect_later/errors.hpp"
#include "connect_later/linalg.hpp"

namespace connect_later {

FtAugmentation::FtAugmentation(Matrix kernel) : kernel_(std::move(kernel)) {
  if (!kernel_.square()) throw ValidationError("FtAugmentation: kernel must be square");
  for (std::size_t i = 0; i < kernel_.rows(); ++i) {
    double row = 0.0;
    for (double v : kernel_.row(i)) {
      if (!(v >= 0.0)) throw ValidationError("FtAugmentation: negative entry in row " + std::to_string(i + 1));
      row += v;
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw ValidationError("FtAugmentation: row " + std::to_string(i + 1) + " is not a distribution");
  }
}

FtAugmentation FtAugmentation::identity(std::size_t n) { return FtAugmentation(Matrix::identity(n)); }

ProbeMoments probe_moments(const Encoder& e, const AugmentationGraph& g, const FtAugmentation& aug) {
  if (e.size() != g.size() || aug.size() != g.size()) throw ValidationError("probe_moments: size mismatch");
  const auto sources = g.source_nodes();
  const std::size_t k = e.dim();
  const auto r = static_cast<std::size_t>(g.num_classes());
  const double ps = 1.0 / static_cast<double>(sources.size());

  ProbeMoments m{Matrix(k, k), Matrix(r, k)};
  for (std::size_t x : sources) {
    const auto label_row = static_cast<std::size_t>(g.class_of(x) - 1);
    for (std::size_t xp = 0; xp < g.size(); ++xp) {
      const double p = ps * aug(x, xp);
      if (p == 0.0) continue;
      const auto phi = e(xp);
      for (std::size_t a = 0; a < k; ++a) {
        m.label_feature(label_row, a) += p * phi[a];
        for (std::size_t b = 0; b < k; ++b) m.feature_gram(a, b) += p * phi[a] * phi[b];
      }
    }
  }
  return m;
}

LinearProbe fit_linear_probe(const Encoder& e, const AugmentationGraph& g, const FtAugmentation& aug, double eta) {
  if (!(eta > 0.0)) throw ValidationError("fit_linear_probe: eta must be positive");
  ProbeMoments m = probe_moments(e, g, aug);
  for (std::size_t i = 0; i < m.feature_gram.rows(); ++i) m.feature_gram(i, i) += eta;
  // Symmetric by construction; (M + eta I) is SPD so B solves B (M + eta I) = M_yphi.
  try {
    return LinearProbe{solve_right_spd(m.label_feature, m.feature_gram), eta};
  } catch (const NumericalError& err) {
    throw NumericalError(std::string("fit_linear_probe: regularized Gram is singular: ") + err.what());
  }
}

Label classify(const LinearProbe& p, const Encoder& e, std::size_t node) {
  if (node >= e.size()) throw ValidationError("classify: node out of range");
  const Vector scores = p.b * e(node);
  const double top = *std::max_element(scores.begin(), scores.end());
  const double tol = kScoreTieTolerance * std::max(1.0, max_abs(scores));
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] >= top - tol) return static_cast<Label>(i + 1);
  return 1;
}

double target_error(const Predictor& predict, const AugmentationGraph& g) {
  const auto targets = g.target_nodes();
  std::size_t wrong = 0;
  for (std::size_t x : targets)
    if (predict(x) != g.class_of(x)) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(targets.size());
}

double probe_target_error(const LinearProbe& p, const Encoder& e, const AugmentationGraph& g) {
  return target_error([&](std::size_t x) { return classify(p, e, x); }, g);
}

std::vector<std::size_t> ErmMinimizerSet::nodes_with(NodeStatus s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].status == s) out.push_back(i);
  return out;
}

ErmMinimizerSet erm_minimizers(const AugmentationGraph& g, const FtAugmentation& aug) {
  if (aug.size() != g.size()) throw ValidationError("erm_minimizers: size mismatch");
  const auto sources = g.source_nodes();
  const auto r = static_cast<std::size_t>(g.num_classes());
  const double ps = 1.0 / static_cast<double>(sources.size());

  ErmMinimizerSet out;
  out.nodes.resize(g.size());
  for (std::size_t xp = 0; xp < g.size(); ++xp) {
    NodeVerdict& v = out.nodes[xp];
    v.votes.assign(r, 0.0);
    for (std::size_t x : sources) v.votes[static_cast<std::size_t>(g.class_of(x) - 1)] += ps * aug(x, xp);

    const double top = *std::max_element(v.votes.begin(), v.votes.end());
    if (top <= 0.0) {
      v.status = NodeStatus::free;
      continue;
    }
    const double tol = 1e-12 * top;
    for (std::size_t l = 0; l < r; ++l)
      if (v.votes[l] >= top - tol) v.labels.push_back(static_cast<Label>(l + 1));
    v.status = v.labels.size() == 1 ? NodeStatus::forced : NodeStatus::tied;
  }

  const auto targets = g.target_nodes();
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t x : targets) {
    const NodeVerdict& v = out.nodes[x];
    const Label truth = g.class_of(x);
    switch (v.status) {
      case NodeStatus::forced:
        if (v.labels.front() != truth) {
          lo += 1.0;
          hi += 1.0;
        }
        break;
      case NodeStatus::tied:
        if (std::find(v.labels.begin(), v.labels.end(), truth) == v.labels.end()) lo += 1.0;
        hi += 1.0;
        break;
      case NodeStatus::free:
        if (r > 1) hi += 1.0;
        break;
    }
  }
  out.min_target_error = lo / static_cast<double>(targets.size());
  out.max_target_error = hi / static_cast<double>(targets.size());
  return out;
}

}  // namespace connect_later
