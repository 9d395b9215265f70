#include "calorie/kinetics.hpp"

#include <string>

#include "calorie/mass.hpp"

namespace calorie {

VelocityTrack velocities(const SkeletonStream& stream) {
  const auto& frames = stream.frames();
  if (frames.size() < 2) {
    throw ValidationError("velocity needs at least 2 frames (got " + std::to_string(frames.size()) + ")");
  }
  VelocityTrack out;
  for (auto& track : out) track.reserve(frames.size() - 1);

  for (std::size_t k = 1; k < frames.size(); ++k) {
    const double dt = frames[k].t - frames[k - 1].t;
    if (!(dt > 0.0)) {
      throw ValidationError("frame " + std::to_string(k) + ": time step must be positive");
    }
    for (JointId j : kAllJoints) {
      const Vec3 v = (frames[k].positions[j] - frames[k - 1].positions[j]) / dt;
      out[j].push_back({j, frames[k].t, v, squared_norm(v)});
    }
  }
  return out;
}

EnergyTrack frame_energies(const VelocityTrack& velocities, const JointMap<double>& masses) {
  EnergyTrack out;
  for (JointId j : kAllJoints) {
    const double m = masses[j];
    if (!std::isfinite(m) || m < 0.0) {
      throw ValidationError("mass for " + std::string(joint_name(j)) + " must be non-negative and finite");
    }
    auto& track = out[j];
    track.reserve(velocities[j].size());
    // The per-axis terms share M_j, so their sum is 0.5 * M_j * |v|^2 and never negative.
    for (const auto& s : velocities[j]) track.push_back({j, s.t, 0.5 * m * s.speed_sq});
  }
  return out;
}

EnergyVector accumulate(const EnergyTrack& energies) {
  EnergyVector total;
  for (JointId j : kAllJoints) {
    double sum = 0.0;
    for (const auto& fe : energies[j]) sum += fe.e;
    total[j] = sum;
  }
  return total;
}

EnergyVector session_energy(const SkeletonStream& stream, const SubjectRecord& subject) {
  return accumulate(frame_energies(velocities(stream), mass_of(subject.mass_profile, subject.weight_kg)));
}

}  // namespace calorie
