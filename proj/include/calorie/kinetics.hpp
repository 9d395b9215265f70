#pragma once

#include <vector>

#include "calorie/types.hpp"

namespace calorie {

/// Backward-difference velocity of one joint over [t_{k-1}, t_k], stamped at t_k.
struct VelocitySample {
  JointId joint{JointId::Head};
  double t{0.0};
  Vec3 v;
  double speed_sq{0.0};

  [[nodiscard]] double speed() const noexcept { return std::sqrt(speed_sq); }
};

/// Kinetic energy 0.5 * M_j * |v|^2 for one joint at one sample time, in joules.
struct FrameEnergy {
  JointId joint{JointId::Head};
  double t{0.0};
  double e{0.0};
};

using VelocityTrack = JointMap<std::vector<VelocitySample>>;
using EnergyTrack = JointMap<std::vector<FrameEnergy>>;

/// n frames yield n-1 samples per joint. Throws ValidationError for fewer
/// than two frames or a non-positive time step.
[[nodiscard]] VelocityTrack velocities(const SkeletonStream& stream);

/// Throws ValidationError on a negative or non-finite mass.
[[nodiscard]] EnergyTrack frame_energies(const VelocityTrack& velocities, const JointMap<double>& masses);

/// K_j = sum of per-frame energies, summed in time order.
[[nodiscard]] EnergyVector accumulate(const EnergyTrack& energies);

/// velocities -> mass_of(profile, weight) -> frame_energies -> accumulate.
[[nodiscard]] EnergyVector session_energy(const SkeletonStream& stream, const SubjectRecord& subject);

}  // namespace calorie
