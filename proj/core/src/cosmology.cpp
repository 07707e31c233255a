#include "connect_later/cosmology.hpp"

#include <cmath>

#include "connect_later/errors.hpp"

namespace connect_later {

namespace {
double inverse_efunc(const Cosmology& c, double z) {
  const double a = 1.0 + z;
  return 1.0 / std::sqrt(c.omega_matter * a * a * a + c.omega_lambda());
}
}  // namespace

void Cosmology::validate() const {
  if (!(hubble_constant > 0.0)) throw ValidationError("Cosmology: H0 must be positive");
  if (!(omega_matter > 0.0 && omega_matter < 1.0)) throw ValidationError("Cosmology: omega_matter must lie in (0, 1)");
}

double comoving_integral_trapezoid(const Cosmology& c, double z, std::size_t intervals) {
  if (intervals == 0) throw ValidationError("comoving_integral_trapezoid: need at least one interval");
  const double h = z / static_cast<double>(intervals);
  double s = 0.5 * (inverse_efunc(c, 0.0) + inverse_efunc(c, z));
  for (std::size_t i = 1; i < intervals; ++i) s += inverse_efunc(c, h * static_cast<double>(i));
  return s * h;
}

double comoving_integral(const Cosmology& c, double z, double rel_tol) {
  // Successive halving reuses previous nodes: only odd midpoints are new.
  std::size_t n = 8;
  double estimate = comoving_integral_trapezoid(c, z, n);
  for (int level = 0; level < 30; ++level) {
    const double h = z / static_cast<double>(2 * n);
    double mid = 0.0;
    for (std::size_t i = 1; i < 2 * n; i += 2) mid += inverse_efunc(c, h * static_cast<double>(i));
    const double refined = 0.5 * estimate + h * mid;
    n *= 2;
    if (std::abs(refined - estimate) <= rel_tol * std::abs(refined)) return refined;
    estimate = refined;
  }
  return estimate;
}

double luminosity_distance_mpc(const Cosmology& c, double z) {
  if (!(z > 0.0)) throw ValidationError("luminosity_distance: redshift must be positive");
  c.validate();
  return (1.0 + z) * c.hubble_distance_mpc() * comoving_integral(c, z);
}

double distance_modulus(const Cosmology& c, double z) {
  if (!(z > 0.0)) throw ValidationError("distance_modulus: redshift must be positive");
  // d_L in Mpc; 10 pc = 1e-5 Mpc.
  return 5.0 * std::log10(luminosity_distance_mpc(c, z)) + 25.0;
}

double flux_scale(const Cosmology& c, double z, double z_new) {
  if (!(z > 0.0) || !(z_new > 0.0)) throw ValidationError("flux_scale: redshifts must be positive");
  if (z == z_new) return 1.0;
  return std::pow(10.0, -0.4 * (distance_modulus(c, z_new) - distance_modulus(c, z)));
}

}  // namespace connect_later
