#include "connect_later/redshift.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "connect_later/errors.hpp"

namespace connect_later {

double NoiseModel::sigma_at(double wavelength) const {
  for (std::size_t i = 0; i < upper_edges.size(); ++i)
    if (wavelength < upper_edges[i]) return sigma[i];
  return sigma.empty() ? 0.0 : sigma.back();
}

void NoiseModel::validate() const {
  if (upper_edges.size() != sigma.size()) throw ValidationError("NoiseModel: edges and sigmas differ in length");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] >= 0.0)) throw ValidationError("NoiseModel: negative noise floor");
    if (i > 0 && !(upper_edges[i] > upper_edges[i - 1])) throw ValidationError("NoiseModel: edges must increase");
  }
}

NoiseModel NoiseModel::zero() { return {{}, {}}; }

NoiseModel estimate_noise_model(const std::vector<LightCurve>& population, const std::vector<double>& upper_edges) {
  std::vector<std::vector<double>> bins(upper_edges.size());
  for (const LightCurve& lc : population)
    for (std::size_t i = 0; i < lc.size(); ++i) {
      auto it = std::upper_bound(upper_edges.begin(), upper_edges.end(), lc.wavelengths[i]);
      const std::size_t b = it == upper_edges.end() ? upper_edges.size() - 1 : static_cast<std::size_t>(it - upper_edges.begin());
      bins[b].push_back(lc.flux_err[i]);
    }
  NoiseModel m{upper_edges, std::vector<double>(upper_edges.size(), 0.0)};
  for (std::size_t b = 0; b < bins.size(); ++b) {
    auto& v = bins[b];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    m.sigma[b] = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  }
  m.validate();
  return m;
}

RedshiftBounds new_redshift_bounds(double z) {
  if (!(z > 0.0)) throw ValidationError("new redshift: z must be positive");
  return {0.95 * z, std::min(1.5 * (1.0 + z) - 1.0, 5.0 * z)};
}

double sample_new_redshift(double z, Rng& rng) {
  const RedshiftBounds b = new_redshift_bounds(z);
  return loguniform(rng, b.lo, b.hi);
}

std::optional<LightCurve> redshift_transform(const LightCurve& lc, const GaussianProcessModel& gp, double z_new,
                                             const NoiseModel& noise, const Cosmology& cosmo,
                                             const RedshiftAugmentOptions& opts, Rng& rng) {
  const ScaledGrid grid = rescale_grid(lc.times, lc.wavelengths, lc.redshift, z_new);
  const std::vector<std::size_t> kept = season_dropout(grid.times, rng, opts.dropout_fraction, opts.season_gap_days);
  const double scale = flux_scale(cosmo, lc.redshift, z_new);

  // One noise realization per band of the new grid.
  std::map<double, double> band_noise;
  for (std::size_t i : kept) band_noise.emplace(grid.wavelengths[i], 0.0);
  for (auto& [w, eps] : band_noise) {
    const double s = noise.sigma_at(w);
    eps = s > 0.0 ? rng.normal(0.0, s) : 0.0;
  }

  LightCurve out;
  out.redshift = z_new;
  out.class_label = lc.class_label;
  out.id = lc.id;
  const double err_floor = 1e-12 * gp.kernel().amplitude;
  for (std::size_t i : kept) {
    const double t = grid.times[i];
    const double w = grid.wavelengths[i];
    const GpPrediction p = gp.predict(t, w);
    const double eps = band_noise.at(w);
    const double mean = scale * p.mean;
    const double sd = scale * std::sqrt(p.variance);
    out.times.push_back(t);
    out.wavelengths.push_back(w);
    out.flux.push_back(mean + eps);
    out.flux_err.push_back(std::max(std::sqrt(sd * sd + eps * eps), err_floor));
  }
  if (!accept(out, opts.snr_rule)) return std::nullopt;
  out.validate();
  return out;
}

TargetedAugmentation<LightCurve, double> redshift_augmentation(const GaussianProcessModel& gp, const NoiseModel& noise,
                                                               const Cosmology& cosmo, const RedshiftAugmentOptions& opts) {
  TargetedAugmentation<LightCurve, double> aug;
  aug.feature_extractor = [](const LightCurve& lc) { return lc.redshift; };
  aug.shift_sampler = opts.redshift_sampler;
  aug.transformer = [&gp, noise, cosmo, opts](const LightCurve& lc, const double& z_new, Rng& rng) {
    return redshift_transform(lc, gp, z_new, noise, cosmo, opts, rng);
  };
  aug.max_retries = opts.max_retries;
  return aug;
}

AugmentedLightCurve redshift_augment(const LightCurve& lc, const NoiseModel& noise, const Cosmology& cosmo, Rng& rng,
                                     const RedshiftAugmentOptions& opts) {
  lc.validate();
  if (lc.size() < 5) throw ValidationError("redshift_augment: need at least 5 observations");
  if (opts.max_retries < 0) throw ValidationError("redshift_augment: max_retries must be non-negative");
  noise.validate();
  cosmo.validate();

  const GaussianProcessModel gp = fit_gp(lc, opts.time_scale_grid, opts.wavelength_scale);

  // Wrap the shift sampler to observe z' and count attempts.
  RedshiftAugmentOptions tracked = opts;
  double last_z = 0.0;
  int attempts = 0;
  tracked.redshift_sampler = [&](double z, Rng& r) {
    ++attempts;
    last_z = opts.redshift_sampler(z, r);
    return last_z;
  };
  const auto aug = redshift_augmentation(gp, noise, cosmo, tracked);
  try {
    LightCurve curve = aug.sample(lc, rng);
    return {std::move(curve), lc.id, last_z, attempts - 1};
  } catch (const AugmentationError&) {
    throw AugmentationError("redshift_augment: no accepted sample for '" + lc.id + "' after " +
                            std::to_string(opts.max_retries) + " retries");
  }
}

}  // namespace connect_later
