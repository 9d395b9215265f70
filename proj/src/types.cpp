#include "calorie/types.hpp"

#include <array>
#include <utility>

namespace calorie {

namespace {

constexpr std::array<std::string_view, kJointCount> kNames = {
    "head",          "left_elbow",     "right_elbow", "left_wrist",  "right_wrist",
    "left_hand",     "right_hand",     "center_shoulder", "left_shoulder", "right_shoulder",
    "spine",         "center_hip",     "left_hip",    "right_hip",   "left_knee",
    "right_knee",    "left_ankle",     "right_ankle", "left_foot",   "right_foot",
};

}  // namespace

std::string_view joint_name(JointId j) noexcept { return kNames[index_of(j)]; }

std::optional<JointId> joint_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kJointCount; ++i) {
    if (kNames[i] == name) return joint_at(i);
  }
  return std::nullopt;
}

std::optional<JointId> joint_from_ordinal(int value) noexcept {
  if (value < 1 || value > static_cast<int>(kJointCount)) return std::nullopt;
  return static_cast<JointId>(value);
}

SkeletonStream::SkeletonStream(std::vector<JointFrame> frames, double nominal_fps)
    : frames_(std::move(frames)), nominal_fps_(nominal_fps) {
  if (!(std::isfinite(nominal_fps_) && nominal_fps_ > 0.0)) {
    throw ValidationError("nominal fps must be positive and finite");
  }
  for (std::size_t k = 0; k < frames_.size(); ++k) {
    const auto& f = frames_[k];
    if (!std::isfinite(f.t) || f.t < 0.0) {
      throw ValidationError("frame " + std::to_string(k) + ": timestamp must be finite and non-negative");
    }
    if (k > 0 && !(f.t > frames_[k - 1].t)) {
      throw ValidationError("frame " + std::to_string(k) + ": timestamps must be strictly increasing");
    }
    for (JointId j : kAllJoints) {
      if (!is_finite(f.positions[j])) {
        throw ValidationError("frame " + std::to_string(k) + ": non-finite position for " +
                              std::string(joint_name(j)));
      }
    }
  }
}

double SkeletonStream::duration() const noexcept {
  if (frames_.size() < 2) return 0.0;
  return frames_.back().t - frames_.front().t;
}

MassProfile::MassProfile(JointMap<double> fractions, ProfileSource source)
    : fractions_(fractions), source_(source) {
  double sum = 0.0;
  for (JointId j : kAllJoints) {
    const double a = fractions_[j];
    if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
      throw ValidationError("mass fraction for " + std::string(joint_name(j)) + " must lie in [0, 1]");
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("mass fractions must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

SubjectRecord::SubjectRecord(std::string id, double weight, MassProfile profile)
    : subject_id(std::move(id)), weight_kg(weight), mass_profile(std::move(profile)) {
  if (!std::isfinite(weight_kg) || weight_kg <= 0.0) {
    throw ValidationError("subject " + subject_id + ": weight must be positive and finite");
  }
}

std::string session_key(const std::string& subject_id, int exercise_index) {
  return subject_id + ":" + std::to_string(exercise_index);
}

}  // namespace calorie
