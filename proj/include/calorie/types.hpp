#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "calorie/joints.hpp"

namespace calorie {

/// Thrown when a value violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

[[nodiscard]] constexpr Vec3 operator+(const Vec3& a, const Vec3& b) noexcept {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
[[nodiscard]] constexpr Vec3 operator-(const Vec3& a, const Vec3& b) noexcept {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
[[nodiscard]] constexpr Vec3 operator*(double s, const Vec3& v) noexcept {
  return {s * v.x, s * v.y, s * v.z};
}
[[nodiscard]] constexpr Vec3 operator/(const Vec3& v, double s) noexcept {
  return {v.x / s, v.y / s, v.z / s};
}
[[nodiscard]] constexpr double squared_norm(const Vec3& v) noexcept {
  return v.x * v.x + v.y * v.y + v.z * v.z;
}
[[nodiscard]] inline bool is_finite(const Vec3& v) noexcept {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// One skeleton sample: all twenty joint positions (meters) at time `t` (seconds).
struct JointFrame {
  double t{0.0};
  JointMap<Vec3> positions;
};

/// Time-ordered skeleton capture. Timestamps are explicit; `nominal_fps` is metadata.
class SkeletonStream {
 public:
  static constexpr double kDefaultFps = 25.0;

  SkeletonStream() = default;
  /// Throws ValidationError on negative, non-finite or non-increasing timestamps
  /// and on non-finite coordinates.
  explicit SkeletonStream(std::vector<JointFrame> frames, double nominal_fps = kDefaultFps);

  [[nodiscard]] const std::vector<JointFrame>& frames() const noexcept { return frames_; }
  [[nodiscard]] std::size_t size() const noexcept { return frames_.size(); }
  [[nodiscard]] double nominal_fps() const noexcept { return nominal_fps_; }
  /// Last timestamp minus first; 0 for fewer than two frames.
  [[nodiscard]] double duration() const noexcept;

 private:
  std::vector<JointFrame> frames_;
  double nominal_fps_{kDefaultFps};
};

enum class ProfileSource { Standard, Personalized };

/// Share of body weight attributed to each joint's segment.
class MassProfile {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Throws ValidationError unless every fraction is finite, in [0, 1], and
  /// the fractions sum to 1 within kSumTolerance.
  MassProfile(JointMap<double> fractions, ProfileSource source);

  [[nodiscard]] double operator[](JointId j) const noexcept { return fractions_[j]; }
  [[nodiscard]] const JointMap<double>& fractions() const noexcept { return fractions_; }
  [[nodiscard]] ProfileSource source() const noexcept { return source_; }

  friend bool operator==(const MassProfile&, const MassProfile&) = default;

 private:
  JointMap<double> fractions_;
  ProfileSource source_;
};

struct SubjectRecord {
  std::string subject_id;
  double weight_kg;
  MassProfile mass_profile;

  /// Throws ValidationError on non-positive or non-finite weight.
  SubjectRecord(std::string id, double weight, MassProfile profile);
};

/// Ground-truth calorie readings for one exercise bout.
struct SessionRecord {
  std::string subject_id;
  int exercise_index{1};
  double rest_kcal{0.0};
  double exercise_kcal{0.0};
  std::string stream_ref;

  /// Experiment-validity screen: resting burn must not exceed exercising burn.
  [[nodiscard]] bool protocol_ok() const noexcept { return rest_kcal <= exercise_kcal; }
};

/// Accumulated kinetic energy per joint over one session, in joules.
struct EnergyVector {
  JointMap<double> energies;

  [[nodiscard]] double operator[](JointId j) const noexcept { return energies[j]; }
  double& operator[](JointId j) noexcept { return energies[j]; }

  friend bool operator==(const EnergyVector&, const EnergyVector&) = default;
};

/// Linear calorie predictor: kcal = bias + sum_j coefficients[j] * K_j.
struct CalorieModel {
  double bias{0.0};
  JointMap<double> coefficients;
  /// "<subject>:<exercise>" keys of the rows the model was fit on.
  std::vector<std::string> training_keys;

  friend bool operator==(const CalorieModel&, const CalorieModel&) = default;
};

[[nodiscard]] std::string session_key(const std::string& subject_id, int exercise_index);

}  // namespace calorie
