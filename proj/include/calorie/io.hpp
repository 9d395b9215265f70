#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "calorie/eval.hpp"
#include "calorie/mass.hpp"
#include "calorie/types.hpp"

namespace calorie::io {

/// Malformed input, located by 1-based line and a column name or number.
/// A line or column of 0 / empty means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string column, const std::string& message);

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string& column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

/// Current version written into every file header ("# calorie-<kind> v1").
inline constexpr int kFormatVersion = 1;

// Skeleton streams: header `t,head_x,head_y,head_z,...,right_foot_z`, one frame per row.
[[nodiscard]] SkeletonStream parse_skeleton_csv(std::string_view text);
[[nodiscard]] std::string write_skeleton_csv(const SkeletonStream& stream);

// Masks and silhouettes: whitespace-separated integer grid, or PGM (P2 / P5).
[[nodiscard]] SegmentationMask parse_mask(std::string_view bytes);
[[nodiscard]] std::string write_mask_text(const SegmentationMask& mask);
[[nodiscard]] Silhouette parse_silhouette(std::string_view bytes);
/// `<joint_name>\t<u>\t<v>`, one row per joint, all twenty required.
[[nodiscard]] JointMap<PixelCoord> parse_joints2d(std::string_view text);

// Mass profiles: `<joint_name>\t<fraction>`, twenty rows.
[[nodiscard]] MassProfile parse_profile_tsv(std::string_view text);
[[nodiscard]] std::string write_profile_tsv(const MassProfile& profile);

// Energy vectors: `<joint_name>\t<joules>`, twenty rows.
[[nodiscard]] EnergyVector parse_energy_tsv(std::string_view text);
[[nodiscard]] std::string write_energy_tsv(const EnergyVector& energy);

// Models: `bias\t<value>` then `<joint_name>\t<coefficient>` rows.
[[nodiscard]] CalorieModel parse_model_tsv(std::string_view text);
[[nodiscard]] std::string write_model_tsv(const CalorieModel& model);

// Error reports: `cell`, `fold` and `mean` rows.
[[nodiscard]] ErrorReport parse_report_tsv(std::string_view text);
[[nodiscard]] std::string write_report_tsv(const ErrorReport& report);

/// Parsed sessions plus protocol warnings (rest burn above exercise burn).
struct SessionTable {
  std::vector<SessionRecord> records;
  std::vector<std::string> warnings;
};

/// Columns `subject,exercise_index,rest_kcal,exercise_kcal,stream_ref`.
/// Sessions naming a subject absent from `subjects` are rejected.
[[nodiscard]] SessionTable parse_sessions_csv(std::string_view text, std::span<const SubjectRecord> subjects);

/// Maps a subjects.csv `mass_profile_ref` to a loaded profile.
using ProfileResolver = std::function<MassProfile(const std::string& ref)>;

/// Columns `subject,weight_kg,mass_profile_ref`.
[[nodiscard]] std::vector<SubjectRecord> parse_subjects_csv(std::string_view text, const ProfileResolver& resolve);

/// Shortest decimal text that reads back to the identical double.
[[nodiscard]] std::string format_double(double value);

}  // namespace calorie::io
