#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace calorie {

/// The twenty tracked skeleton joints. Underlying values are the canonical
/// 1-based joint numbers used in mask labels and file row order.
enum class JointId : std::uint8_t {
  Head = 1,
  LeftElbow,
  RightElbow,
  LeftWrist,
  RightWrist,
  LeftHand,
  RightHand,
  CenterShoulder,
  LeftShoulder,
  RightShoulder,
  Spine,
  CenterHip,
  LeftHip,
  RightHip,
  LeftKnee,
  RightKnee,
  LeftAnkle,
  RightAnkle,
  LeftFoot,
  RightFoot,
};

inline constexpr std::size_t kJointCount = 20;

[[nodiscard]] constexpr int ordinal(JointId j) noexcept { return static_cast<int>(j); }
[[nodiscard]] constexpr std::size_t index_of(JointId j) noexcept {
  return static_cast<std::size_t>(j) - 1;
}
[[nodiscard]] constexpr JointId joint_at(std::size_t index) noexcept {
  return static_cast<JointId>(index + 1);
}

/// All joints in ordinal order.
inline constexpr std::array<JointId, kJointCount> kAllJoints = [] {
  std::array<JointId, kJointCount> out{};
  for (std::size_t i = 0; i < kJointCount; ++i) out[i] = joint_at(i);
  return out;
}();

/// snake_case name used in file headers ("head", "left_elbow", ...).
[[nodiscard]] std::string_view joint_name(JointId j) noexcept;
[[nodiscard]] std::optional<JointId> joint_from_name(std::string_view name) noexcept;
[[nodiscard]] std::optional<JointId> joint_from_ordinal(int ordinal) noexcept;

/// Fixed-size per-joint table indexed by JointId.
template <class T>
class JointMap {
 public:
  constexpr JointMap() = default;
  constexpr explicit JointMap(const T& fill) { values_.fill(fill); }

  constexpr T& operator[](JointId j) noexcept { return values_[index_of(j)]; }
  constexpr const T& operator[](JointId j) const noexcept { return values_[index_of(j)]; }

  constexpr auto begin() noexcept { return values_.begin(); }
  constexpr auto end() noexcept { return values_.end(); }
  constexpr auto begin() const noexcept { return values_.begin(); }
  constexpr auto end() const noexcept { return values_.end(); }
  static constexpr std::size_t size() noexcept { return kJointCount; }

  constexpr const std::array<T, kJointCount>& values() const noexcept { return values_; }

  friend constexpr bool operator==(const JointMap&, const JointMap&) = default;

 private:
  std::array<T, kJointCount> values_{};
};

}  // namespace calorie
