#pragma once

#include <functional>
#include <vector>

#include "connect_later/cosmology.hpp"
#include "connect_later/gaussian_process.hpp"
#include "connect_later/lightcurve.hpp"
#include "connect_later/rng.hpp"
#include "connect_later/targeted_aug.hpp"

namespace connect_later {

// Per-band noise floor as a piecewise-constant function of wavelength.
// Entry i covers wavelengths below upper_edges[i] (and at or above the
// previous edge); the last entry also covers everything above.
struct NoiseModel {
  std::vector<double> upper_edges;
  std::vector<double> sigma;

  double sigma_at(double wavelength) const;
  void validate() const;
  static NoiseModel zero();
};

// Median flux_err of a population per wavelength bin.
NoiseModel estimate_noise_model(const std::vector<LightCurve>& population, const std::vector<double>& upper_edges);

// Bounds of the new-redshift distribution: [0.95 z, min(1.5 (1 + z) - 1, 5 z)].
struct RedshiftBounds {
  double lo;
  double hi;
};
RedshiftBounds new_redshift_bounds(double z);

// loguniform(0.95 z, min(1.5 (1 + z) - 1, 5 z)).
double sample_new_redshift(double z, Rng& rng);

using RedshiftSampler = std::function<double(double, Rng&)>;

struct RedshiftAugmentOptions {
  int max_retries = 10;
  double dropout_fraction = kDefaultDropoutFraction;
  double season_gap_days = kDefaultSeasonGapDays;
  SnrRule snr_rule = SnrRule::at_least;
  std::vector<double> time_scale_grid = kDefaultTimeScaleGrid;
  double wavelength_scale = kDefaultWavelengthScale;
  RedshiftSampler redshift_sampler = sample_new_redshift;
};

struct AugmentedLightCurve {
  LightCurve curve;
  std::string parent_id;
  double z_prime = 0.0;
  int retries = 0;  // rejected attempts before the accepted one
};

// The redshift transformation T(x' | x, z') for an already fitted GP:
// rescale the grid, apply season dropout, query the posterior at the new
// grid, scale mean and standard deviation by flux_scale, add one noise draw
// per band and combine errors in quadrature. Returns nullopt when the
// result fails the detection rule.
std::optional<LightCurve> redshift_transform(const LightCurve& lc, const GaussianProcessModel& gp, double z_new,
                                             const NoiseModel& noise, const Cosmology& cosmo,
                                             const RedshiftAugmentOptions& opts, Rng& rng);

// The redshifting targeted augmentation: feature z is the redshift, the shift
// model is opts.redshift_sampler, the transformer is redshift_transform.
TargetedAugmentation<LightCurve, double> redshift_augmentation(const GaussianProcessModel& gp, const NoiseModel& noise,
                                                               const Cosmology& cosmo, const RedshiftAugmentOptions& opts);

// Fits the GP once, then samples; each retry draws a fresh z'. Throws
// AugmentationError when max_retries is exhausted.
AugmentedLightCurve redshift_augment(const LightCurve& lc, const NoiseModel& noise, const Cosmology& cosmo, Rng& rng,
                                     const RedshiftAugmentOptions& opts = {});

}  // namespace connect_later
