#include "connect_later/gaussian_process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "connect_later/errors.hpp"

namespace connect_later {

double Matern32Kernel::operator()(double t1, double w1, double t2, double w2) const {
  const double dt = (t1 - t2) / time_scale;
  const double dw = (w1 - w2) / wavelength_scale;
  const double sr = std::sqrt(3.0 * (dt * dt + dw * dw));
  return amplitude * amplitude * (1.0 + sr) * std::exp(-sr);
}

GaussianProcessModel::GaussianProcessModel(Matern32Kernel kernel, std::vector<double> times,
                                           std::vector<double> wavelengths, const std::vector<double>& flux,
                                           const std::vector<double>& flux_err)
    : kernel_(kernel), times_(std::move(times)), wavelengths_(std::move(wavelengths)) {
  const std::size_t n = times_.size();
  if (n < 2) throw ValidationError("GaussianProcessModel: need at least 2 observations");
  if (wavelengths_.size() != n || flux.size() != n || flux_err.size() != n)
    throw ValidationError("GaussianProcessModel: length mismatch");
  if (!(kernel_.amplitude > 0.0) || !(kernel_.time_scale > 0.0) || !(kernel_.wavelength_scale > 0.0))
    throw ValidationError("GaussianProcessModel: kernel parameters must be positive");

  Matrix cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      cov(i, j) = cov(j, i) = kernel_(times_[i], wavelengths_[i], times_[j], wavelengths_[j]);
    cov(i, i) = kernel_.variance() + flux_err[i] * flux_err[i];
  }

  double jitter = 0.0;
  for (int escalation = 0;; ++escalation) {
    try {
      chol_.emplace(cov);
      break;
    } catch (const NumericalError& err) {
      if (escalation == 3)
        throw NumericalError(std::string("GaussianProcessModel: covariance not positive definite after 3 jitter "
                                         "escalations (last jitter ") +
                             std::to_string(jitter) + "): " + err.what());
      const double next = 1e-8 * kernel_.variance() * std::pow(10.0, escalation);
      for (std::size_t i = 0; i < n; ++i) cov(i, i) += next - jitter;
      jitter = next;
    }
  }
  jitter_ = jitter;

  alpha_ = chol_->solve(flux);
  log_marginal_likelihood_ =
      -0.5 * dot(flux, alpha_) - 0.5 * chol_->log_determinant() - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

GpPrediction GaussianProcessModel::predict(double t, double w) const {
  const std::size_t n = times_.size();
  Vector k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = kernel_(t, w, times_[i], wavelengths_[i]);
  const Vector v = chol_->solve_lower(k);
  return {dot(k, alpha_), std::max(kernel_.variance() - dot(v, v), 0.0)};
}

GpFitResult fit_gp_with_trace(const LightCurve& lc, const std::vector<double>& time_scale_grid,
                              double wavelength_scale) {
  lc.validate();
  if (lc.size() < 2) throw ValidationError("fit_gp: need at least 2 observations");
  if (time_scale_grid.empty()) throw ValidationError("fit_gp: empty length-scale grid");
  double amplitude = 0.0;
  for (double f : lc.flux) amplitude = std::max(amplitude, std::abs(f));
  if (!(amplitude > 0.0)) amplitude = *std::max_element(lc.flux_err.begin(), lc.flux_err.end());

  std::optional<GaussianProcessModel> best;
  std::vector<double> lls;
  for (double scale : time_scale_grid) {
    GaussianProcessModel m(Matern32Kernel{amplitude, scale, wavelength_scale}, lc.times, lc.wavelengths, lc.flux,
                           lc.flux_err);
    lls.push_back(m.log_marginal_likelihood());
    if (!best || m.log_marginal_likelihood() > best->log_marginal_likelihood()) best.emplace(std::move(m));
  }
  return {std::move(*best), time_scale_grid, std::move(lls)};
}

GaussianProcessModel fit_gp(const LightCurve& lc, const std::vector<double>& time_scale_grid, double wavelength_scale) {
  return fit_gp_with_trace(lc, time_scale_grid, wavelength_scale).model;
}

}  // namespace connect_later
