#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "calorie/types.hpp"

namespace calorie {

/// Per-pixel joint labels: 0 is background, 1..20 are joint ordinals.
/// Row-major, `labels.size() == width * height`.
struct SegmentationMask {
  std::size_t width{0};
  std::size_t height{0};
  std::vector<std::uint8_t> labels;

  [[nodiscard]] std::uint8_t at(std::size_t col, std::size_t row) const { return labels[row * width + col]; }
  [[nodiscard]] std::size_t foreground_count() const noexcept;

  friend bool operator==(const SegmentationMask&, const SegmentationMask&) = default;
};

/// Throws ValidationError on size mismatch or any label outside 0..20.
void validate(const SegmentationMask& mask);

/// Binary body silhouette, row-major.
struct Silhouette {
  std::size_t width{0};
  std::size_t height{0};
  std::vector<bool> foreground;

  [[nodiscard]] bool at(std::size_t col, std::size_t row) const { return foreground[row * width + col]; }
};

/// Joint location in image space: u is the column, v the row.
struct PixelCoord {
  double u{0.0};
  double v{0.0};
};

/// Built-in population-average scale (Head 10 %, Knees 10 % each, ...).
[[nodiscard]] MassProfile standard_profile();

/// fraction(j) = pixels labeled j / foreground pixels. Joints absent from the
/// mask get 0. Throws ValidationError on an invalid or all-background mask.
[[nodiscard]] MassProfile profile_from_mask(const SegmentationMask& mask);

/// Labels each foreground pixel with its nearest joint (Euclidean distance in
/// pixel space). Equal distances go to the lower joint ordinal.
[[nodiscard]] SegmentationMask segment_silhouette(const Silhouette& silhouette,
                                                  const JointMap<PixelCoord>& joints);

/// M_j = weight * a_j. Throws ValidationError unless weight is positive and finite.
[[nodiscard]] JointMap<double> mass_of(const MassProfile& profile, double weight_kg);

}  // namespace calorie
