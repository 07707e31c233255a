#include "connect_later/connectivity.hpp"

#include <array>
#include <cmath>
#include <string>

#include "connect_later/errors.hpp"

namespace connect_later {

namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double ex = std::exp(x);
  return ex / (1.0 + ex);
}

double logit(std::span<const double> params, std::span<const double> x) {
  double s = params.back();
  for (std::size_t i = 0; i < x.size(); ++i) s += params[i] * x[i];
  return s;
}

void check_samples(const std::vector<LabeledSample>& samples) {
  if (samples.empty()) throw ValidationError("train_logistic: no samples");
  const std::size_t d = samples.front().point.size();
  bool seen[2] = {false, false};
  for (const auto& s : samples) {
    if (s.point.size() != d) throw ValidationError("train_logistic: inconsistent point dimension");
    if (s.label != 0 && s.label != 1) throw ValidationError("train_logistic: labels must be 0 or 1");
    for (double v : s.point)
      if (!std::isfinite(v)) throw ValidationError("train_logistic: non-finite coordinate");
    seen[s.label] = true;
  }
  if (!seen[0] || !seen[1]) throw ValidationError("train_logistic: both classes must be present");
}

}  // namespace

ConnectivityReport exact_connectivity(const Matrix& w, const AugmentationGraph& g, PairAveraging mode) {
  const std::size_t n = g.size();
  if (w.rows() != n || w.cols() != n) throw ValidationError("exact_connectivity: size mismatch");

  // Index: 2 * (different class) + (different domain) -> rho, alpha, beta, gamma.
  std::array<double, 4> sum{};
  std::array<std::size_t, 4> count{};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t cat = 2 * (g.class_of(i) != g.class_of(j)) + (g.domain_of(i) != g.domain_of(j));
      if (mode == PairAveraging::nonzero_only && !(w(i, j) > 0.0)) continue;
      sum[cat] += w(i, j);
      ++count[cat];
    }

  constexpr std::array<const char*, 4> names{"rho (same class, same domain)", "alpha (same class, different domain)",
                                             "beta (different class, same domain)",
                                             "gamma (different class, different domain)"};
  std::array<double, 4> mean{};
  for (std::size_t c = 0; c < 4; ++c) {
    if (count[c] == 0) throw ValidationError(std::string("exact_connectivity: empty category ") + names[c]);
    mean[c] = sum[c] / static_cast<double>(count[c]);
  }

  ConnectivityReport r{mean[0], mean[1], mean[2], mean[3]};
  if (r.gamma > 0.0) {
    const TransferVerdict v = check_transfer_condition(r.alpha, r.beta, r.gamma);
    r.ratio_alpha_gamma = v.ratio_alpha_gamma;
    r.ratio_beta_gamma = v.ratio_beta_gamma;
    r.condition_satisfied = v.satisfied;
  } else {
    r.ratio_alpha_gamma = r.alpha > 0.0 ? INFINITY : NAN;
    r.ratio_beta_gamma = r.beta > 0.0 ? INFINITY : NAN;
    r.condition_satisfied = r.alpha > 0.0 && r.beta > 0.0;
  }
  return r;
}

ConnectivityReport exact_connectivity(const PositivePairMatrix& sp, const AugmentationGraph& g, PairAveraging mode) {
  return exact_connectivity(sp.matrix(), g, mode);
}

TransferVerdict check_transfer_condition(double alpha, double beta, double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("check_transfer_condition: gamma must be positive");
  return {alpha > gamma && beta > gamma, alpha / gamma, beta / gamma};
}

double LogisticModel::probability(std::span<const double> x) const {
  double s = bias_;
  for (std::size_t i = 0; i < x.size(); ++i) s += weights_[i] * x[i];
  return sigmoid(s);
}

double logistic_loss(std::span<const double> params, const std::vector<LabeledSample>& samples) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double z = logit(params, s.point);
    total += s.label == 1 ? softplus(-z) : softplus(z);
  }
  return total / static_cast<double>(samples.size());
}

Vector logistic_gradient(std::span<const double> params, const std::vector<LabeledSample>& samples) {
  Vector grad(params.size(), 0.0);
  for (const auto& s : samples) {
    const double residual = sigmoid(logit(params, s.point)) - s.label;
    for (std::size_t i = 0; i < s.point.size(); ++i) grad[i] += residual * s.point[i];
    grad.back() += residual;
  }
  for (double& g : grad) g /= static_cast<double>(samples.size());
  return grad;
}

LogisticFit train_logistic(const std::vector<LabeledSample>& samples, const LogisticOptions& opts) {
  check_samples(samples);
  if (!(opts.learning_rate > 0.0)) throw ValidationError("train_logistic: learning rate must be positive");
  const std::size_t d = samples.front().point.size();

  Vector params(d + 1, 0.0);
  double loss = logistic_loss(params, samples);
  double lr = opts.learning_rate;
  LogisticFit fit;
  fit.loss_history.push_back(loss);

  for (std::size_t step = 0; step < opts.steps; ++step) {
    const Vector grad = logistic_gradient(params, samples);
    bool accepted = false;
    for (int halving = 0; halving < 60 && !accepted; ++halving) {
      Vector trial = params;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= lr * grad[i];
      const double trial_loss = logistic_loss(trial, samples);
      if (trial_loss <= loss) {
        params = std::move(trial);
        loss = trial_loss;
        accepted = true;
      } else {
        lr *= 0.5;
      }
    }
    if (!accepted) break;  // at a stationary point to machine precision
    fit.loss_history.push_back(loss);
  }

  fit.model = LogisticModel(Vector(params.begin(), params.end() - 1), params.back());
  return fit;
}

double classification_error(const LogisticModel& m, const std::vector<LabeledSample>& samples) {
  if (samples.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& s : samples)
    if (m.predict(s.point) != s.label) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(samples.size());
}

double empirical_connectivity(const PointSampler& a, const PointSampler& b, const EmpiricalConnectivityOptions& opts,
                              Rng& rng) {
  if (opts.n_train < 100 || opts.n_test < 100)
    throw ValidationError("empirical_connectivity: n_train and n_test must be at least 100");
  auto draw = [&](Rng stream, std::size_t n) {
    std::vector<LabeledSample> out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({a(stream), 0});
      out.push_back({b(stream), 1});
    }
    return out;
  };
  const Rng base(rng.next_u64());
  const auto train = draw(base.split("train"), opts.n_train);
  const auto test = draw(base.split("test"), opts.n_test);
  const LogisticFit fit = train_logistic(train, opts.logistic);
  return classification_error(fit.model, test);
}

double gaussian_bayes_error(double separation) { return 0.5 * std::erfc(std::abs(separation) / (2.0 * std::sqrt(2.0))); }

}  // namespace connect_later
