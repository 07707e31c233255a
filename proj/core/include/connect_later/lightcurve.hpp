#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "connect_later/rng.hpp"

namespace connect_later {

// Irregularly sampled multiband photometry. Parallel arrays, one entry per
// observation, sorted by time.
struct LightCurve {
  std::vector<double> times;        // days
  std::vector<double> wavelengths;  // Angstrom
  std::vector<double> flux;
  std::vector<double> flux_err;     // > 0
  double redshift = 0.1;
  std::optional<int> class_label;
  std::string id;

  std::size_t size() const { return times.size(); }
  // Throws ValidationError on ragged arrays, non-positive errors or redshift,
  // or unsorted times.
  void validate() const;
};

struct SynthParams {
  double amplitude = 1000.0;
  double t0 = 0.0;
  double rise = 3.0;
  double fall = 20.0;
  // LSST ugrizy effective wavelengths.
  std::vector<double> bands{3671.0, 4827.0, 6223.0, 7546.0, 8691.0, 9712.0};
  double cadence = 8.0;  // days between visits in one band
  double t_start = -50.0;
  double t_end = 150.0;
  double noise = 10.0;   // per-observation flux error
  double peak_wavelength = 5500.0;
  double sed_width = 3000.0;
  double redshift = 0.1;
  std::optional<int> class_label;
  std::string id;
};

// A(w) e^{-(t - t0)/fall} / (1 + e^{-(t - t0)/rise}) with a Gaussian color
// profile A(w) = amplitude exp(-((w - peak)/width)^2 / 2).
double bazin_flux(const SynthParams& p, double t, double w);

// Bands are visited every `cadence` days, staggered by cadence / n_bands, and
// each observation gets Gaussian noise with standard deviation `noise`.
LightCurve synth_lightcurve(const SynthParams& p, Rng& rng);

// Observations scaled by (1 + z_new) / (1 + z) in time and wavelength.
struct ScaledGrid {
  std::vector<double> times;
  std::vector<double> wavelengths;
};
ScaledGrid rescale_grid(const std::vector<double>& times, const std::vector<double>& wavelengths, double z, double z_new);

inline constexpr double kDefaultDropoutFraction = 0.1;
inline constexpr double kDefaultSeasonGapDays = 50.0;

// Indices of the points that survive: each point is dropped independently
// with probability frac, then every point inside one window of length
// gap_days, with start uniform on [t_min - gap_days, t_max], is removed.
std::vector<std::size_t> season_dropout(const std::vector<double>& times, Rng& rng,
                                        double frac = kDefaultDropoutFraction,
                                        double gap_days = kDefaultSeasonGapDays);

double snr(double x, double x_err);

enum class SnrRule { at_least, strictly_over };

// At least two observations with SNR >= 5 (or > 5 under strictly_over).
bool accept(const LightCurve& lc, SnrRule rule = SnrRule::at_least);
std::size_t count_detections(const LightCurve& lc, SnrRule rule = SnrRule::at_least);

// CSV with header time,wavelength,flux,flux_err plus a JSON sidecar holding
// redshift, class and id (and any provenance fields).
void write_lightcurve_csv(const LightCurve& lc, const std::filesystem::path& csv);
LightCurve read_lightcurve(const std::filesystem::path& csv, const std::filesystem::path& sidecar);
std::string lightcurve_csv(const LightCurve& lc);

}  // namespace connect_later
