#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "calorie/regression.hpp"
#include "calorie/types.hpp"

namespace calorie {

/// Which mass profile feeds the energy computation.
enum class MassMethod { Personalized, StandardScale };

[[nodiscard]] std::string_view method_name(MassMethod m) noexcept;
[[nodiscard]] std::optional<MassMethod> method_from_name(std::string_view name) noexcept;

/// |truth - predicted| / truth. Throws ValidationError unless truth > 0.
[[nodiscard]] double error_rate(double cc_truth, double cc_predicted);

struct ErrorCell {
  std::string subject_id;
  int exercise_index{1};
  double error_rate{0.0};
  std::optional<double> truth;
  std::optional<double> predicted;
};

/// Which sessions trained and which tested one cross-validation fold.
struct FoldManifest {
  int held_out_index{1};
  std::vector<std::string> train_keys;
  std::vector<std::string> test_keys;
};

struct ErrorReport {
  std::string method;
  std::vector<ErrorCell> cells;
  std::vector<FoldManifest> folds;

  /// Unweighted mean over all cells; 0 for an empty report.
  [[nodiscard]] double mean() const noexcept;
};

/// Sessions keyed by stream_ref -> loaded skeleton stream.
using StreamTable = std::map<std::string, SkeletonStream>;

/// Energy vectors for every session under the chosen mass method, in session order.
[[nodiscard]] std::vector<TrainingRow> session_rows(std::span<const SessionRecord> sessions,
                                                    std::span<const SubjectRecord> subjects,
                                                    const StreamTable& streams, MassMethod method);

/// Fold f holds out exercise index f of every subject and trains on the rest.
/// Requires every subject to have the same set of exercise indices and `k`
/// to equal the number of distinct indices; throws ValidationError otherwise.
[[nodiscard]] ErrorReport cross_validate(std::span<const SessionRecord> sessions,
                                         std::span<const SubjectRecord> subjects,
                                         const StreamTable& streams, int k, MassMethod method);

/// Fits on all sessions and reports error on those same sessions.
[[nodiscard]] ErrorReport training_errors(std::span<const SessionRecord> sessions,
                                          std::span<const SubjectRecord> subjects,
                                          const StreamTable& streams, MassMethod method);

enum class WilcoxonMethod { Auto, Exact, NormalApprox };

struct WilcoxonResult {
  std::size_t n_effective{0};
  double w_plus{0.0};
  double w_minus{0.0};
  double statistic{0.0};  ///< min(w_plus, w_minus)
  double p_value{1.0};    ///< two-sided
  WilcoxonMethod method{WilcoxonMethod::Exact};
  bool degenerate{false};  ///< every difference was zero
};

/// Largest n_effective for which Auto uses exact enumeration.
inline constexpr std::size_t kExactWilcoxonLimit = 25;

/// Two-sided Wilcoxon signed-rank test on d = a - b.
///
/// Zero differences are dropped and tied |d| share mid-ranks. Auto picks the
/// exact null distribution for n_effective <= kExactWilcoxonLimit and the
/// tie-corrected normal approximation (no continuity correction) above it.
[[nodiscard]] WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                                  WilcoxonMethod method = WilcoxonMethod::Auto);

/// Null distribution of the doubled positive-rank sum, P(2 W+ = s) for
/// s = 0 .. sum(doubled_ranks), over all 2^n equally likely sign assignments.
[[nodiscard]] std::vector<double> signed_rank_null_distribution(std::span<const int> doubled_ranks);

/// Pairs the error rates of two reports cell by cell on (subject, exercise).
/// Throws ValidationError if the reports do not cover the same cells.
[[nodiscard]] std::vector<std::pair<double, double>> paired_rates(const ErrorReport& a, const ErrorReport& b);

}  // namespace calorie
