#pragma once

#include <cstdint>

#include "lava/rf.hpp"

namespace lava::detail {

void count_likelihood_calls(std::uint64_t n);

/// Received-power model with the per-pose terms hoisted out of the particle loop.
class LinkBudget {
 public:
  LinkBudget(const UavState& uav, const PropagationConfig& cfg);

  /// NaN when the tag sits exactly on the antenna.
  double power(const Vec3& object) const;
  double log_likelihood(double rssi_dbm, const Vec3& particle) const;

 private:
  const PropagationConfig* cfg_;
  Vec3 uav_;
  double heading_;
  double cos_h_;
  double sin_h_;
  double ten_n_;
  double inv_two_var_;
  double log_norm_;
  double k_phase_;
};

}  // namespace lava::detail
