#include "lava/rf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lava/detail/link_budget.hpp"

namespace lava {

namespace {
thread_local std::uint64_t g_likelihood_calls = 0;
}

std::uint64_t likelihood_call_count() { return g_likelihood_calls; }

namespace detail {
void count_likelihood_calls(std::uint64_t n) { g_likelihood_calls += n; }
}  // namespace detail

double AntennaPattern::gain_db(double relative_azimuth) const {
  const double phi = normalize_heading(relative_azimuth);
  if (kind == Kind::Yagi) {
    const double q = 0.5 * (1.0 + std::cos(phi));
    return gain_max_db + 10.0 * std::log10(std::max(floor, q * q));
  }
  const auto n = table_db.size();
  const double pos = phi / (2.0 * std::numbers::pi) * static_cast<double>(n);
  const auto i0 = static_cast<std::size_t>(pos) % n;
  const auto i1 = (i0 + 1) % n;
  const double frac = pos - std::floor(pos);
  return table_db[i0] + frac * (table_db[i1] - table_db[i0]);
}

void AntennaPattern::validate() const {
  if (kind == Kind::Yagi) {
    if (!(floor > 0.0)) throw std::invalid_argument("antenna: floor must be > 0");
  } else if (table_db.empty()) {
    throw std::invalid_argument("antenna: table pattern needs at least one sample");
  }
}

void PropagationConfig::validate() const {
  if (!(path_loss_n >= 2.0 && path_loss_n <= 4.0))
    throw std::invalid_argument("propagation: path_loss_n must lie in [2, 4]");
  if (!(noise_var_db2 > 0.0)) throw std::invalid_argument("propagation: noise variance must be > 0");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("propagation: wavelength must be > 0");
  if (reflection == ReflectionMode::Constant && !(std::abs(gamma0) <= 1.0))
    throw std::invalid_argument("propagation: |gamma| must be <= 1");
  if (reflection == ReflectionMode::Fresnel && !(permittivity >= 1.0))
    throw std::invalid_argument("propagation: relative permittivity must be >= 1");
  antenna.validate();
}

double reflection_coefficient(double psi, const PropagationConfig& cfg) {
  if (cfg.reflection == ReflectionMode::Constant) return cfg.gamma0;
  const double s = std::sin(psi);
  const double c = std::cos(psi);
  const double root = std::sqrt(cfg.permittivity - c * c);
  return (s - root) / (s + root);
}

double received_power(const Vec3& object, const UavState& uav, const PropagationConfig& cfg) {
  const detail::LinkBudget link(uav, cfg);
  const double p = link.power(object);
  if (std::isnan(p)) throw std::domain_error("received_power: tag and UAV positions coincide");
  return p;
}

Measurement sample_measurement(const ObjectState& object, const UavState& uav,
                               const PropagationConfig& cfg, Rng& rng, long time_step) {
  const double mean = received_power(object, uav, cfg);
  std::normal_distribution<double> noise(0.0, std::sqrt(cfg.noise_var_db2));
  return {object.tag_id, mean + noise(rng), time_step};
}

double log_likelihood(double rssi_dbm, const Vec3& particle, const UavState& uav,
                      const PropagationConfig& cfg) {
  const detail::LinkBudget link(uav, cfg);
  return link.log_likelihood(rssi_dbm, particle);
}

namespace detail {

LinkBudget::LinkBudget(const UavState& uav, const PropagationConfig& cfg)
    : cfg_(&cfg),
      uav_(uav.position),
      heading_(uav.heading),
      cos_h_(std::cos(uav.heading)),
      sin_h_(std::sin(uav.heading)),
      ten_n_(10.0 * cfg.path_loss_n),
      inv_two_var_(0.5 / cfg.noise_var_db2),
      log_norm_(-0.5 * std::log(2.0 * std::numbers::pi * cfg.noise_var_db2)),
      k_phase_(2.0 * std::numbers::pi / cfg.wavelength_m) {}

double LinkBudget::power(const Vec3& object) const {
  const double dx = object.x - uav_.x;
  const double dy = object.y - uav_.y;
  const double h_rx = uav_.z;
  const double h_tx = object.z;
  const double dh2 = dx * dx + dy * dy;
  const double dz_los = h_rx - h_tx;
  const double dz_ref = h_rx + h_tx;
  const double d_los = std::sqrt(dh2 + dz_los * dz_los);
  if (d_los == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d_ref = std::sqrt(dh2 + dz_ref * dz_ref);
  // d_ref - d_los without cancellation.
  const double path_diff = 4.0 * h_rx * h_tx / (d_ref + d_los);
  const double dphi = k_phase_ * path_diff;

  double gamma = cfg_->gamma0;
  if (cfg_->reflection == ReflectionMode::Fresnel) {
    const double sin_psi = dz_ref / d_ref;
    const double cos2_psi = dh2 / (d_ref * d_ref);
    const double root = std::sqrt(cfg_->permittivity - cos2_psi);
    gamma = (sin_psi - root) / (sin_psi + root);
  }
  // |1 + G e^{-j dphi}|^2 for real G.
  const double multipath2 = 1.0 + 2.0 * gamma * std::cos(dphi) + gamma * gamma;

  double gain;
  const auto& ant = cfg_->antenna;
  const double dh = std::sqrt(dh2);
  if (ant.kind == AntennaPattern::Kind::Yagi) {
    // cos of the azimuth relative to boresight; atan2(0, 0) = 0 convention when overhead.
    const double c = dh > 0.0 ? (dx * cos_h_ + dy * sin_h_) / dh : cos_h_;
    const double q = 0.5 * (1.0 + c);
    gain = ant.gain_max_db + 10.0 * std::log10(std::max(ant.floor, q * q));
  } else {
    gain = ant.gain_db(std::atan2(dy, dx) - heading_);
  }

  return cfg_->p0_dbm - ten_n_ * std::log10(d_los) + gain +
         0.5 * ten_n_ * std::log10(multipath2);
}

double LinkBudget::log_likelihood(double rssi_dbm, const Vec3& particle) const {
  count_likelihood_calls(1);
  const double h = power(particle);
  if (std::isnan(h)) return -std::numeric_limits<double>::infinity();
  const double r = rssi_dbm - h;
  return log_norm_ - r * r * inv_two_var_;
}

}  // namespace detail
}  // namespace lava
