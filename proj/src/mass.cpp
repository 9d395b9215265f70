#include "calorie/mass.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

namespace calorie {

std::size_t SegmentationMask::foreground_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](std::uint8_t l) { return l != 0; }));
}

void validate(const SegmentationMask& mask) {
  if (mask.labels.size() != mask.width * mask.height) {
    throw ValidationError("mask label count does not match width x height");
  }
  for (std::size_t i = 0; i < mask.labels.size(); ++i) {
    if (mask.labels[i] > kJointCount) {
      throw ValidationError("mask pixel (" + std::to_string(i % mask.width) + ", " +
                            std::to_string(i / mask.width) + "): label " +
                            std::to_string(mask.labels[i]) + " exceeds 20");
    }
  }
}

MassProfile standard_profile() {
  // Per-mille so the table sums to exactly 1000.
  constexpr std::array<int, kJointCount> kPerMille = {
      100,       // head
      40,  40,   // elbows
      30,  30,   // wrists
      25,  25,   // hands
      60,        // center shoulder
      30,  30,   // shoulders
      60,        // spine
      60,        // center hip
      30,  30,   // hips
      100, 100,  // knees
      70,  70,   // ankles
      35,  35,   // feet
  };
  JointMap<double> fractions;
  for (std::size_t i = 0; i < kJointCount; ++i) fractions[joint_at(i)] = kPerMille[i] / 1000.0;
  return MassProfile(fractions, ProfileSource::Standard);
}

MassProfile profile_from_mask(const SegmentationMask& mask) {
  validate(mask);
  std::array<std::size_t, kJointCount + 1> counts{};
  for (std::uint8_t label : mask.labels) ++counts[label];
  const std::size_t total = mask.labels.size() - counts[0];
  if (total == 0) throw ValidationError("mask has no foreground pixels");

  JointMap<double> fractions;
  for (JointId j : kAllJoints) {
    fractions[j] = static_cast<double>(counts[ordinal(j)]) / static_cast<double>(total);
  }
  return MassProfile(fractions, ProfileSource::Personalized);
}

SegmentationMask segment_silhouette(const Silhouette& silhouette, const JointMap<PixelCoord>& joints) {
  if (silhouette.foreground.size() != silhouette.width * silhouette.height) {
    throw ValidationError("silhouette pixel count does not match width x height");
  }
  if (std::none_of(silhouette.foreground.begin(), silhouette.foreground.end(), [](bool b) { return b; })) {
    throw ValidationError("silhouette has no foreground pixels");
  }
  for (JointId j : kAllJoints) {
    if (!std::isfinite(joints[j].u) || !std::isfinite(joints[j].v)) {
      throw ValidationError("non-finite pixel coordinate for " + std::string(joint_name(j)));
    }
  }

  SegmentationMask mask{silhouette.width, silhouette.height,
                        std::vector<std::uint8_t>(silhouette.foreground.size(), 0)};
  for (std::size_t row = 0; row < silhouette.height; ++row) {
    for (std::size_t col = 0; col < silhouette.width; ++col) {
      if (!silhouette.at(col, row)) continue;
      double best = std::numeric_limits<double>::infinity();
      JointId owner = JointId::Head;
      for (JointId j : kAllJoints) {
        const double du = static_cast<double>(col) - joints[j].u;
        const double dv = static_cast<double>(row) - joints[j].v;
        const double d2 = du * du + dv * dv;
        if (d2 < best) {
          best = d2;
          owner = j;
        }
      }
      mask.labels[row * mask.width + col] = static_cast<std::uint8_t>(ordinal(owner));
    }
  }
  return mask;
}

JointMap<double> mass_of(const MassProfile& profile, double weight_kg) {
  if (!std::isfinite(weight_kg) || weight_kg <= 0.0) {
    throw ValidationError("weight must be positive and finite");
  }
  JointMap<double> masses;
  for (JointId j : kAllJoints) masses[j] = weight_kg * profile[j];
  return masses;
}

}  // namespace calorie
