#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "connect_later/lightcurve.hpp"
#include "connect_later/linalg.hpp"

namespace connect_later {

// Matern-3/2 kernel over (time, wavelength) with an anisotropic distance
// r = sqrt((dt / time_scale)^2 + (dw / wavelength_scale)^2):
//   k = amplitude^2 (1 + sqrt(3) r) exp(-sqrt(3) r)
struct Matern32Kernel {
  double amplitude = 1.0;
  double time_scale = 20.0;         // days
  double wavelength_scale = 6000.0;  // Angstrom

  double operator()(double t1, double w1, double t2, double w2) const;
  double variance() const { return amplitude * amplitude; }
};

inline constexpr double kDefaultWavelengthScale = 6000.0;
inline const std::vector<double> kDefaultTimeScaleGrid{10.0, 20.0, 40.0, 80.0, 160.0};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Zero-mean GP conditioned on a light curve. Immutable after fit.
class GaussianProcessModel {
 public:
  // Conditions on the observations with noise variance flux_err^2. On a
  // Cholesky failure the diagonal receives 1e-8 * amplitude^2 extra jitter,
  // growing tenfold, for up to three escalations before NumericalError.
  GaussianProcessModel(Matern32Kernel kernel, std::vector<double> times, std::vector<double> wavelengths,
                       const std::vector<double>& flux, const std::vector<double>& flux_err);

  GpPrediction predict(double t, double w) const;
  const Matern32Kernel& kernel() const { return kernel_; }
  double log_marginal_likelihood() const { return log_marginal_likelihood_; }
  double jitter() const { return jitter_; }
  std::size_t size() const { return times_.size(); }

 private:
  Matern32Kernel kernel_;
  std::vector<double> times_;
  std::vector<double> wavelengths_;
  std::optional<Cholesky> chol_;
  Vector alpha_;
  double log_marginal_likelihood_ = 0.0;
  double jitter_ = 0.0;
};

struct GpFitResult {
  GaussianProcessModel model;
  std::vector<double> grid;
  std::vector<double> log_likelihoods;  // one per grid entry
};

// Picks the time scale from the grid by maximum marginal likelihood, with the
// wavelength scale fixed and the amplitude set to max |flux|.
GpFitResult fit_gp_with_trace(const LightCurve& lc, const std::vector<double>& time_scale_grid = kDefaultTimeScaleGrid,
                              double wavelength_scale = kDefaultWavelengthScale);
GaussianProcessModel fit_gp(const LightCurve& lc, const std::vector<double>& time_scale_grid = kDefaultTimeScaleGrid,
                            double wavelength_scale = kDefaultWavelengthScale);

}  // namespace connect_later
