#pragma once

#include <cstddef>

namespace connect_later {

inline constexpr double kSpeedOfLightKmS = 299792.458;

// Flat Lambda-CDM.
struct Cosmology {
  double hubble_constant = 70.0;  // km/s/Mpc
  double omega_matter = 0.3;

  double omega_lambda() const { return 1.0 - omega_matter; }
  double hubble_distance_mpc() const { return kSpeedOfLightKmS / hubble_constant; }
  void validate() const;
};

// int_0^z dz / E(z) by composite trapezoid with `intervals` panels.
double comoving_integral_trapezoid(const Cosmology& c, double z, std::size_t intervals);
// Same integral, doubling the panel count until successive estimates agree to
// rel_tol.
double comoving_integral(const Cosmology& c, double z, double rel_tol = 1e-8);

double luminosity_distance_mpc(const Cosmology& c, double z);
// 5 log10(d_L / 10 pc). Throws ValidationError for z <= 0.
double distance_modulus(const Cosmology& c, double z);

// Flux multiplier for moving an object from z to z_new:
// 10^{-0.4 (mu(z_new) - mu(z))}; below 1 when the object moves farther away.
double flux_scale(const Cosmology& c, double z, double z_new);

}  // namespace connect_later
