#pragma once

// Independent reimplementations used as test oracles. Nothing here calls
// into the library except for the plain data types at the boundary.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using Edge = std::pair<int, int>;  // 1-based inputs

struct EdgeTable {
  std::vector<Edge> alpha, beta, gamma;
};

// Edge lists of the 8-node construction, written out by hand.
inline EdgeTable edge_table(bool swapped) {
  const std::vector<Edge> beta{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  if (!swapped)
    return {{{1, 3}, {3, 5}, {5, 7}, {2, 4}, {4, 6}, {6, 8}, {1, 7}, {2, 8}},
            beta,
            {{1, 4}, {2, 3}, {3, 6}, {4, 5}, {5, 8}, {6, 7}, {1, 8}, {2, 7}}};
  return {{{1, 4}, {3, 5}, {5, 7}, {2, 3}, {4, 6}, {6, 8}, {1, 8}, {2, 7}},
          beta,
          {{1, 3}, {2, 4}, {3, 6}, {4, 5}, {5, 8}, {6, 7}, {1, 7}, {2, 8}}};
}

inline Eigen::MatrixXd kernel(bool swapped, double rho = 0.4, double alpha = 0.2, double beta = 0.1,
                              double gamma = 0.05) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(8, 8) * rho;
  const EdgeTable t = edge_table(swapped);
  auto put = [&](const std::vector<Edge>& edges, double v) {
    for (auto [a, b] : edges) k(a - 1, b - 1) = k(b - 1, a - 1) = v;
  };
  put(t.alpha, alpha);
  put(t.beta, beta);
  put(t.gamma, gamma);
  return k;
}

inline int true_label(int node0) { return node0 % 2 == 0 ? 1 : 2; }  // odd inputs are class 1
inline bool is_source(int node0) { return node0 < 2; }

// Source 1 -> target_of_1, source 2 -> target_of_2 (1-based), identity elsewhere.
inline Eigen::MatrixXd shift_aug(int target_of_1, int target_of_2) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(8, 8);
  a(0, 0) = a(1, 1) = 0.0;
  a(0, target_of_1 - 1) = 1.0;
  a(1, target_of_2 - 1) = 1.0;
  return a;
}
inline Eigen::MatrixXd class_consistent_aug() { return shift_aug(3, 4); }
inline Eigen::MatrixXd literal_aug() { return shift_aug(4, 3); }

struct ErmResult {
  std::vector<int> agreed;  // per node: the label every minimizer uses, or 0
  std::vector<bool> reachable;
  double min_error = 0.0, max_error = 0.0;
};

// Enumerates every tabular classifier f: nodes -> {1..r} and keeps the ones
// minimizing E_{x~P_S} E_{x'~aug(.|x)} 1[f(x') != y_x].
inline ErmResult brute_force_erm(const Eigen::MatrixXd& aug, const std::vector<int>& labels,
                                 const std::vector<bool>& source, int r) {
  const int n = static_cast<int>(labels.size());
  int n_source = 0, n_target = 0;
  for (int i = 0; i < n; ++i) (source[i] ? n_source : n_target)++;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(r);

  std::vector<double> losses(total), errors(total);
  std::vector<int> f(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = 0; i < n; ++i) {
      f[i] = static_cast<int>(c % r) + 1;
      c /= r;
    }
    double loss = 0.0;
    for (int x = 0; x < n; ++x) {
      if (!source[x]) continue;
      for (int xp = 0; xp < n; ++xp)
        if (f[xp] != labels[x]) loss += aug(x, xp) / n_source;
    }
    int wrong = 0;
    for (int x = 0; x < n; ++x)
      if (!source[x] && f[x] != labels[x]) ++wrong;
    losses[code] = loss;
    errors[code] = static_cast<double>(wrong) / n_target;
  }
  const double best = *std::min_element(losses.begin(), losses.end());

  ErmResult out;
  out.agreed.assign(n, -1);
  out.min_error = 2.0;
  out.max_error = -1.0;
  for (std::uint64_t code = 0; code < total; ++code) {
    if (losses[code] > best + 1e-12) continue;
    std::uint64_t c = code;
    for (int i = 0; i < n; ++i) {
      const int label = static_cast<int>(c % r) + 1;
      c /= r;
      if (out.agreed[i] == -1) out.agreed[i] = label;
      else if (out.agreed[i] != label) out.agreed[i] = 0;
    }
    out.min_error = std::min(out.min_error, errors[code]);
    out.max_error = std::max(out.max_error, errors[code]);
  }
  out.reachable.assign(n, false);
  for (int x = 0; x < n; ++x)
    if (source[x])
      for (int xp = 0; xp < n; ++xp)
        if (aug(x, xp) > 0.0) out.reachable[xp] = true;
  return out;
}

// Closed-form encoder plus ridge probe, end to end, on the 8-node graph.
// Valid for k that does not split a degenerate eigenspace of the normalized
// adjacency.
inline double probe_target_error(const Eigen::MatrixXd& pre, const Eigen::MatrixXd& aug, int k, double eta) {
  const int n = 8;
  const Eigen::VectorXd p_u = Eigen::VectorXd::Constant(n, 1.0 / n);
  const Eigen::MatrixXd s = pre.transpose() * p_u.asDiagonal() * pre;
  const Eigen::VectorXd w = s.rowwise().sum();
  const Eigen::VectorXd inv_sqrt = w.array().rsqrt();
  const Eigen::MatrixXd a = inv_sqrt.asDiagonal() * s * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);

  Eigen::MatrixXd phi(n, k);
  for (int j = 0; j < k; ++j) {
    const int col = n - 1 - j;  // eigenvalues ascending
    const double lam = std::max(es.eigenvalues()(col), 0.0);
    phi.col(j) = inv_sqrt.asDiagonal() * es.eigenvectors().col(col) * std::sqrt(lam);
  }

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd label_feat = Eigen::MatrixXd::Zero(2, k);
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < n; ++xp) {
      const double pr = 0.5 * aug(x, xp);
      if (pr == 0.0) continue;
      const Eigen::RowVectorXd f = phi.row(xp);
      gram += pr * f.transpose() * f;
      label_feat.row(true_label(x) - 1) += pr * f;
    }
  const Eigen::MatrixXd reg = gram + eta * Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd b = reg.ldlt().solve(label_feat.transpose()).transpose();

  int wrong = 0;
  for (int x = 2; x < n; ++x) {
    const Eigen::VectorXd score = b * phi.row(x).transpose();
    const double tol = 1e-9 * std::max(1.0, score.cwiseAbs().maxCoeff());
    const int pred = score(1) > score(0) + tol ? 2 : 1;
    wrong += pred != true_label(x);
  }
  return wrong / 6.0;
}

}  // namespace oracle
