#pragma once

#include <cstddef>
#include <vector>

#include "lava/rf.hpp"
#include "lava/world.hpp"

namespace lava {

struct TrackerConfig {
  std::size_t particle_count = 10000;
  double resample_threshold = 0.5;  // fraction of particle_count
  double sigma_min = 35.0;          // m

  void validate() const;
};

/// Weighted particle approximation of one tag's position belief.
struct ObjectBelief {
  int tag_id = 1;
  std::vector<Vec3> particles;
  std::vector<double> weights;
  bool localized = false;

  std::size_t size() const { return particles.size(); }
};

ObjectBelief init_belief(int tag_id, const Area& area, double tag_height,
                         const TrackerConfig& cfg, Rng& rng);

/// Propagates every particle through the random walk. Weights are untouched.
void predict(ObjectBelief& belief, const TargetDynamics& dyn, const Area& area, Rng& rng);

/**
 * Bayes reweighting by the RSSI likelihood, normalised in the log domain.
 *
 * Returns false when every likelihood underflowed; the weights are then reset
 * to uniform and the caller should record a divergence event.
 */
bool update(ObjectBelief& belief, const Measurement& z, const UavState& uav,
            const PropagationConfig& cfg);

double effective_sample_size(const ObjectBelief& belief);

/// Systematic resampling when ESS < resample_threshold * N. Returns true if it resampled.
bool resample_if_needed(ObjectBelief& belief, const TrackerConfig& cfg, Rng& rng);

/// Unconditional systematic resampling.
void systematic_resample(ObjectBelief& belief, Rng& rng);

/// Weighted mean of the particles.
Vec3 estimate(const ObjectBelief& belief);

/// Largest per-axis weighted standard deviation about the weighted mean.
double uncertainty(const ObjectBelief& belief);

/// Latches `localized` once uncertainty drops below sigma_min. Returns the flag.
bool refresh_localized(ObjectBelief& belief, double sigma_min);

}  // namespace lava
