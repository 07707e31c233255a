#include "connect_later/lightcurve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "connect_later/errors.hpp"
#include "connect_later/format.hpp"

namespace connect_later {

void LightCurve::validate() const {
  const std::size_t n = times.size();
  if (wavelengths.size() != n || flux.size() != n || flux_err.size() != n)
    throw ValidationError("LightCurve: parallel arrays differ in length");
  if (!(redshift > 0.0)) throw ValidationError("LightCurve: redshift must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(wavelengths[i]) || !std::isfinite(flux[i]))
      throw ValidationError("LightCurve: non-finite observation " + std::to_string(i));
    if (!(flux_err[i] > 0.0) || !std::isfinite(flux_err[i]))
      throw ValidationError("LightCurve: flux_err must be positive at observation " + std::to_string(i));
    if (i > 0 && times[i] < times[i - 1]) throw ValidationError("LightCurve: times are not ascending");
  }
}

double bazin_flux(const SynthParams& p, double t, double w) {
  const double color = std::exp(-0.5 * std::pow((w - p.peak_wavelength) / p.sed_width, 2));
  const double dt = t - p.t0;
  return p.amplitude * color * std::exp(-dt / p.fall) / (1.0 + std::exp(-dt / p.rise));
}

LightCurve synth_lightcurve(const SynthParams& p, Rng& rng) {
  if (!(p.rise > 0.0) || !(p.fall > 0.0) || !(p.cadence > 0.0))
    throw ValidationError("synth_lightcurve: rise, fall and cadence must be positive");
  if (!(p.noise > 0.0)) throw ValidationError("synth_lightcurve: noise must be positive");
  if (p.bands.empty()) throw ValidationError("synth_lightcurve: no bands");
  if (!(p.t_end >= p.t_start)) throw ValidationError("synth_lightcurve: empty time range");

  struct Visit {
    double t;
    double w;
  };
  std::vector<Visit> visits;
  const double stagger = p.cadence / static_cast<double>(p.bands.size());
  for (std::size_t b = 0; b < p.bands.size(); ++b)
    for (double t = p.t_start + b * stagger; t <= p.t_end; t += p.cadence) visits.push_back({t, p.bands[b]});
  std::stable_sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) { return a.t < b.t; });

  LightCurve lc;
  lc.redshift = p.redshift;
  lc.class_label = p.class_label;
  lc.id = p.id;
  for (const Visit& v : visits) {
    lc.times.push_back(v.t);
    lc.wavelengths.push_back(v.w);
    lc.flux.push_back(bazin_flux(p, v.t, v.w) + rng.normal(0.0, p.noise));
    lc.flux_err.push_back(p.noise);
  }
  lc.validate();
  return lc;
}

ScaledGrid rescale_grid(const std::vector<double>& times, const std::vector<double>& wavelengths, double z,
                        double z_new) {
  if (!(z > 0.0) || !(z_new > 0.0)) throw ValidationError("rescale_grid: redshifts must be positive");
  if (times.size() != wavelengths.size()) throw ValidationError("rescale_grid: length mismatch");
  const double factor = (1.0 + z_new) / (1.0 + z);
  ScaledGrid g{times, wavelengths};
  for (double& t : g.times) t *= factor;
  for (double& w : g.wavelengths) w *= factor;
  return g;
}

std::vector<std::size_t> season_dropout(const std::vector<double>& times, Rng& rng, double frac, double gap_days) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw ValidationError("season_dropout: frac must lie in [0, 1]");
  if (!(gap_days >= 0.0)) throw ValidationError("season_dropout: gap_days must be non-negative");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!rng.bernoulli(frac)) kept.push_back(i);
  if (times.empty()) return kept;

  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  const double start = rng.uniform(*lo - gap_days, *hi);
  const double end = start + gap_days;
  if (gap_days > 0.0)
    std::erase_if(kept, [&](std::size_t i) { return times[i] >= start && times[i] < end; });
  return kept;
}

double snr(double x, double x_err) {
  if (!(x_err > 0.0)) throw ValidationError("snr: error must be positive");
  return std::abs(x) / x_err;
}

std::size_t count_detections(const LightCurve& lc, SnrRule rule) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < lc.size(); ++i) {
    const double s = snr(lc.flux[i], lc.flux_err[i]);
    if (rule == SnrRule::at_least ? s >= 5.0 : s > 5.0) ++n;
  }
  return n;
}

bool accept(const LightCurve& lc, SnrRule rule) { return count_detections(lc, rule) >= 2; }

std::string lightcurve_csv(const LightCurve& lc) {
  std::string out = "time,wavelength,flux,flux_err\n";
  for (std::size_t i = 0; i < lc.size(); ++i)
    out += format_real(lc.times[i]) + "," + format_real(lc.wavelengths[i]) + "," + format_real(lc.flux[i]) + "," +
           format_real(lc.flux_err[i]) + "\n";
  return out;
}

void write_lightcurve_csv(const LightCurve& lc, const std::filesystem::path& csv) {
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + csv.string());
  f << lightcurve_csv(lc);
}

LightCurve read_lightcurve(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
  std::ifstream f(csv);
  if (!f) throw ValidationError("cannot open " + csv.string());
  std::string line;
  if (!std::getline(f, line)) throw ValidationError("light curve CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time,wavelength,flux,flux_err")
    throw ValidationError("light curve CSV header must be time,wavelength,flux,flux_err");

  LightCurve lc;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (double& x : v) {
      if (!std::getline(row, cell, ',')) throw ValidationError("light curve CSV: short row at line " + std::to_string(lineno));
      try {
        x = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("light curve CSV: bad number at line " + std::to_string(lineno));
      }
    }
    lc.times.push_back(v[0]);
    lc.wavelengths.push_back(v[1]);
    lc.flux.push_back(v[2]);
    lc.flux_err.push_back(v[3]);
  }

  std::ifstream s(sidecar);
  if (!s) throw ValidationError("cannot open " + sidecar.string());
  nlohmann::json meta;
  try {
    s >> meta;
    lc.redshift = meta.at("redshift").get<double>();
    if (meta.contains("class") && !meta["class"].is_null()) lc.class_label = meta["class"].get<int>();
    if (meta.contains("id")) lc.id = meta["id"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("light curve sidecar: ") + e.what());
  }
  lc.validate();
  return lc;
}

}  // namespace connect_later
