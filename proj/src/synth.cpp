#include "calorie/synth.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace calorie::synth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 along(Axis axis, double value) {
  switch (axis) {
    case Axis::X: return {value, 0.0, 0.0};
    case Axis::Y: return {0.0, value, 0.0};
    case Axis::Z: return {0.0, 0.0, value};
  }
  return {};
}

Vec3 displacement(const Motion& motion, double t) {
  return std::visit(Overloaded{
                        [](const Stationary&) { return Vec3{}; },
                        [t](const ConstantVelocity& m) { return t * m.velocity; },
                        [t](const Sinusoid& m) { return along(m.axis, m.amplitude * std::sin(m.omega * t)); },
                    },
                    motion);
}

void check(const MotionSpec& spec) {
  if (!(std::isfinite(spec.duration) && spec.duration > 0.0)) {
    throw ValidationError("motion spec duration must be positive");
  }
  if (!(std::isfinite(spec.fps) && spec.fps > 0.0)) throw ValidationError("motion spec fps must be positive");
  if (!(std::isfinite(spec.jitter_sigma) && spec.jitter_sigma >= 0.0)) {
    throw ValidationError("jitter sigma must be non-negative");
  }
}

}  // namespace

std::size_t frame_count(const MotionSpec& spec) {
  check(spec);
  return static_cast<std::size_t>(std::floor(spec.duration * spec.fps + 1e-9)) + 1;
}

SkeletonStream generate(const MotionSpec& spec, const JointMap<Vec3>& start) {
  const std::size_t n = frame_count(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.jitter_sigma > 0.0 ? spec.jitter_sigma : 1.0);

  std::vector<JointFrame> frames(n);
  for (std::size_t k = 0; k < n; ++k) {
    frames[k].t = static_cast<double>(k) / spec.fps;
    for (JointId j : kAllJoints) {
      Vec3 p = start[j] + displacement(spec.motions[j], frames[k].t);
      if (spec.jitter_sigma > 0.0) p = p + Vec3{noise(rng), noise(rng), noise(rng)};
      frames[k].positions[j] = p;
    }
  }
  return SkeletonStream(std::move(frames), spec.fps);
}

EnergyVector expected_energy(const MotionSpec& spec, const JointMap<double>& masses) {
  const std::size_t n = frame_count(spec);
  if (spec.jitter_sigma > 0.0) throw ValidationError("no closed-form energy for jittered motion");

  EnergyVector out;
  for (JointId j : kAllJoints) {
    const long double m = masses[j];
    out[j] = std::visit(
        Overloaded{
            [](const Stationary&) { return 0.0; },
            [&](const ConstantVelocity& c) {
              const long double v2 = static_cast<long double>(c.velocity.x) * c.velocity.x +
                                     static_cast<long double>(c.velocity.y) * c.velocity.y +
                                     static_cast<long double>(c.velocity.z) * c.velocity.z;
              return static_cast<double>(static_cast<long double>(n - 1) * 0.5L * m * v2);
            },
            [&](const Sinusoid& s) {
              // sin(a) - sin(b) = 2 cos((a + b) / 2) sin((a - b) / 2), evaluated in extended precision.
              const long double step = 1.0L / static_cast<long double>(spec.fps);
              const long double half = 0.5L * static_cast<long double>(s.omega) * step;
              long double sum = 0.0L;
              for (std::size_t k = 1; k < n; ++k) {
                const long double mid = static_cast<long double>(s.omega) * (static_cast<long double>(k) - 0.5L) * step;
                const long double v = 2.0L * s.amplitude * std::cos(mid) * std::sin(half) / step;
                sum += 0.5L * m * v * v;
              }
              return static_cast<double>(sum);
            },
        },
        spec.motions[j]);
  }
  return out;
}

JointMap<Vec3> default_pose() {
  JointMap<Vec3> p;
  p[JointId::Head] = {0.0, 1.65, 2.0};
  p[JointId::CenterShoulder] = {0.0, 1.45, 2.0};
  p[JointId::LeftShoulder] = {-0.18, 1.42, 2.0};
  p[JointId::RightShoulder] = {0.18, 1.42, 2.0};
  p[JointId::LeftElbow] = {-0.22, 1.70, 2.0};
  p[JointId::RightElbow] = {0.22, 1.70, 2.0};
  p[JointId::LeftWrist] = {-0.24, 1.95, 2.0};
  p[JointId::RightWrist] = {0.24, 1.95, 2.0};
  p[JointId::LeftHand] = {-0.25, 2.03, 2.0};
  p[JointId::RightHand] = {0.25, 2.03, 2.0};
  p[JointId::Spine] = {0.0, 1.15, 2.0};
  p[JointId::CenterHip] = {0.0, 0.95, 2.0};
  p[JointId::LeftHip] = {-0.1, 0.92, 2.0};
  p[JointId::RightHip] = {0.1, 0.92, 2.0};
  p[JointId::LeftKnee] = {-0.11, 0.52, 2.0};
  p[JointId::RightKnee] = {0.11, 0.52, 2.0};
  p[JointId::LeftAnkle] = {-0.12, 0.1, 2.0};
  p[JointId::RightAnkle] = {0.12, 0.1, 2.0};
  p[JointId::LeftFoot] = {-0.13, 0.03, 1.92};
  p[JointId::RightFoot] = {0.13, 0.03, 1.92};
  return p;
}

}  // namespace calorie::synth
