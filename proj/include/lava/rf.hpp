#pragma once

#include <cstdint>
#include <vector>

#include "lava/world.hpp"

namespace lava {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double wavelength_for_mhz(double mhz) { return kSpeedOfLight / (mhz * 1e6); }

enum class ReflectionMode { Constant, Fresnel };

/**
 * Receive-antenna azimuth pattern, boresight along the UAV heading.
 *
 * Yagi: G(phi) = gain_max + 10 log10(max(floor, ((1 + cos phi) / 2)^2)).
 * Table: `table_db` samples the pattern at equally spaced azimuths over
 * [0, 2pi), linearly interpolated and wrapped.
 */
struct AntennaPattern {
  enum class Kind { Yagi, Table };

  Kind kind = Kind::Yagi;
  double gain_max_db = 4.0;
  double floor = 1e-2;
  std::vector<double> table_db;

  double gain_db(double relative_azimuth) const;
  void validate() const;
};

struct PropagationConfig {
  double p0_dbm = -40.0;
  double path_loss_n = 3.0;
  double wavelength_m = wavelength_for_mhz(151.0);
  ReflectionMode reflection = ReflectionMode::Constant;
  double gamma0 = -0.8;          // constant-mode coefficient
  double permittivity = 15.0;    // Fresnel mode, horizontal polarisation
  AntennaPattern antenna;
  double noise_var_db2 = 25.0;   // Q(z)

  void validate() const;
};

struct Measurement {
  int tag_id = 1;
  double rssi_dbm = 0.0;
  long time_step = 0;
};

/// Ground reflection coefficient at grazing angle `psi` (radians).
double reflection_coefficient(double psi, const PropagationConfig& cfg);

/**
 * Two-ray received power in dBm at `uav` from a tag at `object`:
 *   P0 - 10 n log10(d) + G_r + 10 n log10 |1 + Gamma(psi) exp(-j dphi)|
 * with the reflected path taken from the ground-image geometry.
 * Throws std::domain_error when the positions coincide.
 */
double received_power(const Vec3& object, const UavState& uav, const PropagationConfig& cfg);

inline double received_power(const ObjectState& object, const UavState& uav,
                             const PropagationConfig& cfg) {
  return received_power(object.position, uav, cfg);
}

Measurement sample_measurement(const ObjectState& object, const UavState& uav,
                               const PropagationConfig& cfg, Rng& rng, long time_step = 0);

/// Gaussian log-density of `rssi` about the predicted power for a tag at `particle`.
/// A particle coincident with the UAV scores -inf.
double log_likelihood(double rssi_dbm, const Vec3& particle, const UavState& uav,
                      const PropagationConfig& cfg);

inline double log_likelihood(const Measurement& z, const ObjectState& particle,
                             const UavState& uav, const PropagationConfig& cfg) {
  return log_likelihood(z.rssi_dbm, particle.position, uav, cfg);
}

/// Per-thread count of log_likelihood evaluations (planner instrumentation).
std::uint64_t likelihood_call_count();

}  // namespace lava
