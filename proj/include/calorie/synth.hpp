#pragma once

#include <cstdint>
#include <variant>

#include "calorie/types.hpp"

namespace calorie::synth {

struct Stationary {};

struct ConstantVelocity {
  Vec3 velocity;  // m/s
};

enum class Axis { X, Y, Z };

/// Displacement amplitude * sin(omega * t) along one axis.
struct Sinusoid {
  double amplitude{0.0};  // m
  double omega{0.0};      // rad/s
  Axis axis{Axis::X};
};

using Motion = std::variant<Stationary, ConstantVelocity, Sinusoid>;

struct MotionSpec {
  JointMap<Motion> motions;
  double duration{1.0};  // s
  double fps{SkeletonStream::kDefaultFps};
  /// Std-dev of additive Gaussian position noise (m); 0 disables it.
  double jitter_sigma{0.0};
  std::uint64_t seed{0};
};

/// Frame count for a spec: floor(duration * fps) + 1, samples at k / fps.
[[nodiscard]] std::size_t frame_count(const MotionSpec& spec);

/// Samples each joint's trajectory start[j] + displacement(t). Throws
/// ValidationError on non-positive duration or fps.
[[nodiscard]] SkeletonStream generate(const MotionSpec& spec, const JointMap<Vec3>& start);

/// Accumulated energy the kinetics pipeline must produce on generate(spec)
/// for the given masses: the discrete backward-difference per-frame sum, not
/// the continuous integral. Throws ValidationError if jitter is enabled.
[[nodiscard]] EnergyVector expected_energy(const MotionSpec& spec, const JointMap<double>& masses);

/// A fixed, non-degenerate standing pose used as default start positions.
[[nodiscard]] JointMap<Vec3> default_pose();

}  // namespace calorie::synth
