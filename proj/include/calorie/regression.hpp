#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "calorie/types.hpp"

namespace calorie {

struct TrainingRow {
  std::string subject_id;
  int exercise_index{1};
  EnergyVector energy;
  double cc_truth{0.0};
};

/// Rows of (accumulated energies, ground-truth kcal) used to fit a CalorieModel.
class TrainingSet {
 public:
  /// Throws ValidationError when empty, on negative or non-finite targets, on
  /// non-finite energies, or on a repeated (subject, exercise) key.
  explicit TrainingSet(std::vector<TrainingRow> rows);

  [[nodiscard]] const std::vector<TrainingRow>& rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<TrainingRow> rows_;
};

/// Minimum-norm least-squares solution of A x = b.
///
/// Uses a full SVD of A; singular values at or below
/// max(rows, cols) * epsilon * sigma_max are treated as zero, so
/// rank-deficient and underdetermined systems return the pseudoinverse
/// solution pinv(A) * b.
[[nodiscard]] Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Fits bias and the twenty joint coefficients on the design matrix [1 | K].
/// With fewer than 21 independent rows the fit interpolates the training data.
[[nodiscard]] CalorieModel fit(const TrainingSet& train);

/// bias + sum_j b_j * K_j. Throws ValidationError on non-finite inputs.
[[nodiscard]] double predict(const CalorieModel& model, const EnergyVector& k);

}  // namespace calorie
