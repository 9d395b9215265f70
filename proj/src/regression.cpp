#include "calorie/regression.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

namespace calorie {

TrainingSet::TrainingSet(std::vector<TrainingRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ValidationError("training set needs at least one row");
  std::set<std::string> seen;
  for (const auto& r : rows_) {
    const auto key = session_key(r.subject_id, r.exercise_index);
    if (!std::isfinite(r.cc_truth) || r.cc_truth < 0.0) {
      throw ValidationError("training row " + key + ": target kcal must be finite and non-negative");
    }
    for (double e : r.energy.energies) {
      if (!std::isfinite(e)) throw ValidationError("training row " + key + ": non-finite energy");
    }
    if (!seen.insert(key).second) throw ValidationError("duplicate training row " + key);
  }
}

Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != b.size()) throw ValidationError("least squares: row count mismatch");
  if (!a.allFinite() || !b.allFinite()) throw ValidationError("least squares: non-finite input");
  if (a.size() == 0) return Eigen::VectorXd::Zero(a.cols());

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) *
                        std::numeric_limits<double>::epsilon() * (sigma.size() > 0 ? sigma(0) : 0.0);

  Eigen::VectorXd coeffs = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    coeffs(i) = sigma(i) > cutoff ? coeffs(i) / sigma(i) : 0.0;
  }
  return svd.matrixV() * coeffs;
}

CalorieModel fit(const TrainingSet& train) {
  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd design(n, static_cast<Eigen::Index>(kJointCount) + 1);
  Eigen::VectorXd target(n);
  CalorieModel model;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = train.rows()[static_cast<std::size_t>(r)];
    design(r, 0) = 1.0;
    for (JointId j : kAllJoints) design(r, ordinal(j)) = row.energy[j];
    target(r) = row.cc_truth;
    model.training_keys.push_back(session_key(row.subject_id, row.exercise_index));
  }

  const Eigen::VectorXd b = min_norm_least_squares(design, target);
  model.bias = b(0);
  for (JointId j : kAllJoints) model.coefficients[j] = b(ordinal(j));
  return model;
}

double predict(const CalorieModel& model, const EnergyVector& k) {
  double cc = model.bias;
  for (JointId j : kAllJoints) cc += model.coefficients[j] * k[j];
  if (!std::isfinite(cc)) throw ValidationError("prediction is not finite");
  return cc;
}

}  // namespace calorie
