#include "lava/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lava/detail/link_budget.hpp"

namespace lava {

void TrackerConfig::validate() const {
  if (particle_count == 0) throw std::invalid_argument("tracker: particle_count must be > 0");
  if (!(resample_threshold > 0.0 && resample_threshold <= 1.0))
    throw std::invalid_argument("tracker: resample_threshold must be in (0, 1]");
  if (!(sigma_min > 0.0)) throw std::invalid_argument("tracker: sigma_min must be > 0");
}

ObjectBelief init_belief(int tag_id, const Area& area, double tag_height,
                         const TrackerConfig& cfg, Rng& rng) {
  if (!area.valid()) throw std::invalid_argument("init_belief: empty area");
  ObjectBelief b;
  b.tag_id = tag_id;
  b.particles.resize(cfg.particle_count);
  b.weights.assign(cfg.particle_count, 1.0 / static_cast<double>(cfg.particle_count));
  std::uniform_real_distribution<double> ux(area.x_min, area.x_max);
  std::uniform_real_distribution<double> uy(area.y_min, area.y_max);
  for (auto& p : b.particles) {
    p.x = ux(rng);
    p.y = uy(rng);
    p.z = tag_height;
  }
  return b;
}

void predict(ObjectBelief& belief, const TargetDynamics& dyn, const Area& area, Rng& rng) {
  const double sx = std::sqrt(dyn.process_noise_var.x);
  const double sy = std::sqrt(dyn.process_noise_var.y);
  if (sx == 0.0 && sy == 0.0) return;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& p : belief.particles) {
    if (sx > 0.0) p.x += sx * gauss(rng);
    if (sy > 0.0) p.y += sy * gauss(rng);
    p.x = std::clamp(p.x, area.x_min, area.x_max);
    p.y = std::clamp(p.y, area.y_min, area.y_max);
  }
}

bool update(ObjectBelief& belief, const Measurement& z, const UavState& uav,
            const PropagationConfig& cfg) {
  if (z.tag_id != belief.tag_id) throw std::invalid_argument("update: measurement tag mismatch");
  const std::size_t n = belief.size();
  const detail::LinkBudget link(uav, cfg);

  std::vector<double> log_w(n);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = belief.weights[i];
    log_w[i] = w > 0.0 ? std::log(w) + link.log_likelihood(z.rssi_dbm, belief.particles[i])
                       : -std::numeric_limits<double>::infinity();
    max_log = std::max(max_log, log_w[i]);
  }

  const double uniform = 1.0 / static_cast<double>(n);
  if (!std::isfinite(max_log)) {
    std::fill(belief.weights.begin(), belief.weights.end(), uniform);
    return false;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    belief.weights[i] = std::exp(log_w[i] - max_log);
    total += belief.weights[i];
  }
  for (auto& w : belief.weights) w /= total;
  return true;
}

double effective_sample_size(const ObjectBelief& belief) {
  double sum_sq = 0.0;
  for (double w : belief.weights) sum_sq += w * w;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

void systematic_resample(ObjectBelief& belief, Rng& rng) {
  const std::size_t n = belief.size();
  if (n == 0) return;
  const double step = 1.0 / static_cast<double>(n);
  std::uniform_real_distribution<double> u(0.0, step);
  double pointer = u(rng);

  std::vector<Vec3> next;
  next.reserve(n);
  double cumulative = belief.weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (cumulative <= pointer && j + 1 < n) cumulative += belief.weights[++j];
    next.push_back(belief.particles[j]);
    pointer += step;
  }
  belief.particles = std::move(next);
  std::fill(belief.weights.begin(), belief.weights.end(), step);
}

bool resample_if_needed(ObjectBelief& belief, const TrackerConfig& cfg, Rng& rng) {
  const double threshold = cfg.resample_threshold * static_cast<double>(belief.size());
  if (effective_sample_size(belief) >= threshold) return false;
  systematic_resample(belief, rng);
  return true;
}

Vec3 estimate(const ObjectBelief& belief) {
  Vec3 m;
  for (std::size_t i = 0; i < belief.size(); ++i) {
    const double w = belief.weights[i];
    m.x += w * belief.particles[i].x;
    m.y += w * belief.particles[i].y;
    m.z += w * belief.particles[i].z;
  }
  return m;
}

double uncertainty(const ObjectBelief& belief) {
  const Vec3 m = estimate(belief);
  double vx = 0.0, vy = 0.0, vz = 0.0;
  for (std::size_t i = 0; i < belief.size(); ++i) {
    const double w = belief.weights[i];
    const Vec3& p = belief.particles[i];
    vx += w * (p.x - m.x) * (p.x - m.x);
    vy += w * (p.y - m.y) * (p.y - m.y);
    vz += w * (p.z - m.z) * (p.z - m.z);
  }
  return std::sqrt(std::max({vx, vy, vz}));
}

bool refresh_localized(ObjectBelief& belief, double sigma_min) {
  if (!belief.localized && uncertainty(belief) < sigma_min) belief.localized = true;
  return belief.localized;
}

}  // namespace lava
