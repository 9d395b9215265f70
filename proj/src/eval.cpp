#include "calorie/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "calorie/kinetics.hpp"
#include "calorie/mass.hpp"

namespace calorie {

std::string_view method_name(MassMethod m) noexcept {
  return m == MassMethod::Personalized ? "personalized" : "standard";
}

std::optional<MassMethod> method_from_name(std::string_view name) noexcept {
  if (name == "personalized") return MassMethod::Personalized;
  if (name == "standard") return MassMethod::StandardScale;
  return std::nullopt;
}

double error_rate(double cc_truth, double cc_predicted) {
  if (!std::isfinite(cc_truth) || cc_truth <= 0.0) throw ValidationError("error rate needs a positive truth value");
  if (!std::isfinite(cc_predicted)) throw ValidationError("error rate needs a finite prediction");
  return std::abs(cc_truth - cc_predicted) / cc_truth;
}

double ErrorReport::mean() const noexcept {
  if (cells.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : cells) sum += c.error_rate;
  return sum / static_cast<double>(cells.size());
}

std::vector<TrainingRow> session_rows(std::span<const SessionRecord> sessions,
                                      std::span<const SubjectRecord> subjects, const StreamTable& streams,
                                      MassMethod method) {
  const MassProfile standard = standard_profile();
  std::vector<TrainingRow> rows;
  rows.reserve(sessions.size());
  for (const auto& s : sessions) {
    const auto subject = std::find_if(subjects.begin(), subjects.end(),
                                      [&](const SubjectRecord& r) { return r.subject_id == s.subject_id; });
    if (subject == subjects.end()) throw ValidationError("session references unknown subject " + s.subject_id);
    const auto stream = streams.find(s.stream_ref);
    if (stream == streams.end()) throw ValidationError("no stream loaded for " + s.stream_ref);

    const SubjectRecord effective =
        method == MassMethod::Personalized ? *subject : SubjectRecord(subject->subject_id, subject->weight_kg, standard);
    rows.push_back({s.subject_id, s.exercise_index, session_energy(stream->second, effective), s.exercise_kcal});
  }
  return rows;
}

namespace {

struct Layout {
  std::vector<std::string> subject_order;
  std::vector<int> indices;  // sorted distinct exercise indices
};

Layout balanced_layout(std::span<const SessionRecord> sessions) {
  std::map<std::string, std::set<int>> by_subject;
  Layout layout;
  for (const auto& s : sessions) {
    if (!by_subject.contains(s.subject_id)) layout.subject_order.push_back(s.subject_id);
    if (!by_subject[s.subject_id].insert(s.exercise_index).second) {
      throw ValidationError("duplicate session " + session_key(s.subject_id, s.exercise_index));
    }
  }
  if (by_subject.empty()) throw ValidationError("no sessions to evaluate");
  const auto& reference = by_subject.begin()->second;
  for (const auto& [subject, indices] : by_subject) {
    if (indices != reference) {
      throw ValidationError("unbalanced exercise indices: subject " + subject +
                            " does not share the exercise set of " + by_subject.begin()->first);
    }
  }
  layout.indices.assign(reference.begin(), reference.end());
  return layout;
}

void sort_cells(std::vector<ErrorCell>& cells, const std::vector<std::string>& subject_order) {
  auto rank = [&](const std::string& id) {
    return std::find(subject_order.begin(), subject_order.end(), id) - subject_order.begin();
  };
  std::stable_sort(cells.begin(), cells.end(), [&](const ErrorCell& a, const ErrorCell& b) {
    const auto ra = rank(a.subject_id);
    const auto rb = rank(b.subject_id);
    return ra != rb ? ra < rb : a.exercise_index < b.exercise_index;
  });
}

ErrorCell score(const CalorieModel& model, const TrainingRow& row) {
  const double pred = predict(model, row.energy);
  return {row.subject_id, row.exercise_index, error_rate(row.cc_truth, pred), row.cc_truth, pred};
}

}  // namespace

ErrorReport cross_validate(std::span<const SessionRecord> sessions, std::span<const SubjectRecord> subjects,
                           const StreamTable& streams, int k, MassMethod method) {
  const Layout layout = balanced_layout(sessions);
  if (k != static_cast<int>(layout.indices.size())) {
    throw ValidationError("k = " + std::to_string(k) + " but sessions have " +
                          std::to_string(layout.indices.size()) + " distinct exercise indices");
  }
  if (k < 2) throw ValidationError("cross validation needs at least 2 exercise indices");

  const auto rows = session_rows(sessions, subjects, streams, method);
  ErrorReport report{std::string(method_name(method)), {}, {}};
  for (int held_out : layout.indices) {
    std::vector<TrainingRow> train_rows;
    FoldManifest manifest{held_out, {}, {}};
    for (const auto& r : rows) {
      auto& keys = r.exercise_index == held_out ? manifest.test_keys : manifest.train_keys;
      keys.push_back(session_key(r.subject_id, r.exercise_index));
      if (r.exercise_index != held_out) train_rows.push_back(r);
    }
    const CalorieModel model = fit(TrainingSet(std::move(train_rows)));
    for (const auto& r : rows) {
      if (r.exercise_index == held_out) report.cells.push_back(score(model, r));
    }
    report.folds.push_back(std::move(manifest));
  }
  sort_cells(report.cells, layout.subject_order);
  return report;
}

ErrorReport training_errors(std::span<const SessionRecord> sessions, std::span<const SubjectRecord> subjects,
                            const StreamTable& streams, MassMethod method) {
  const auto rows = session_rows(sessions, subjects, streams, method);
  const CalorieModel model = fit(TrainingSet(rows));
  ErrorReport report{std::string(method_name(method)), {}, {}};
  for (const auto& r : rows) report.cells.push_back(score(model, r));
  return report;
}

std::vector<double> signed_rank_null_distribution(std::span<const int> doubled_ranks) {
  const int total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), 0);
  // counts[s] = number of sign assignments whose positive doubled ranks sum to s
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  int reach = 0;
  for (int r : doubled_ranks) {
    reach += r;
    for (int s = reach; s >= r; --s) counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(doubled_ranks.size()));
  for (double& c : counts) c *= scale;
  return counts;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, WilcoxonMethod method) {
  if (pairs.empty()) throw ValidationError("signed-rank test needs at least one pair");

  // |d| within this relative distance of each other (or of zero) are treated as equal.
  constexpr double kRelTol = 1e-12;
  std::vector<double> diffs;
  for (const auto& [a, b] : pairs) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("signed-rank test needs finite values");
    const double d = a - b;
    if (std::abs(d) > kRelTol * std::max(std::abs(a), std::abs(b))) diffs.push_back(d);
  }

  WilcoxonResult result;
  result.n_effective = diffs.size();
  if (diffs.empty()) {
    result.degenerate = true;
    result.p_value = 1.0;
    result.method = method == WilcoxonMethod::NormalApprox ? WilcoxonMethod::NormalApprox : WilcoxonMethod::Exact;
    return result;
  }

  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(diffs[i]) < std::abs(diffs[j]);
  });

  // Doubled mid-ranks keep everything integral.
  std::vector<int> doubled(diffs.size());
  double tie_term = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t stop = start + 1;
    const double base = std::abs(diffs[order[start]]);
    while (stop < order.size() && std::abs(diffs[order[stop]]) - base <= kRelTol * std::abs(diffs[order[stop]])) ++stop;
    const int mid2 = static_cast<int>(start + 1 + stop);  // (start+1) + stop == 2 * mid-rank
    for (std::size_t i = start; i < stop; ++i) doubled[order[i]] = mid2;
    const double t = static_cast<double>(stop - start);
    tie_term += t * t * t - t;
    start = stop;
  }

  int w_plus2 = 0;
  int w_minus2 = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? w_plus2 : w_minus2) += doubled[i];
  result.w_plus = w_plus2 / 2.0;
  result.w_minus = w_minus2 / 2.0;
  result.statistic = std::min(result.w_plus, result.w_minus);

  const std::size_t n = diffs.size();
  const bool exact =
      method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && n <= kExactWilcoxonLimit);
  if (exact) {
    const auto dist = signed_rank_null_distribution(doubled);
    const int lo = std::min(w_plus2, w_minus2);
    double tail = 0.0;
    for (int s = 0; s <= lo; ++s) tail += dist[static_cast<std::size_t>(s)];
    result.p_value = std::min(1.0, 2.0 * tail);
    result.method = WilcoxonMethod::Exact;
  } else {
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (result.statistic - mean) / std::sqrt(var);
    result.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
    result.method = WilcoxonMethod::NormalApprox;
  }
  return result;
}

std::vector<std::pair<double, double>> paired_rates(const ErrorReport& a, const ErrorReport& b) {
  std::map<std::string, double> rhs;
  for (const auto& c : b.cells) rhs[session_key(c.subject_id, c.exercise_index)] = c.error_rate;
  if (rhs.size() != b.cells.size() || a.cells.size() != b.cells.size()) {
    throw ValidationError("reports do not cover the same (subject, exercise) cells");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(a.cells.size());
  for (const auto& c : a.cells) {
    const auto key = session_key(c.subject_id, c.exercise_index);
    const auto it = rhs.find(key);
    if (it == rhs.end()) throw ValidationError("cell " + key + " missing from the second report");
    out.emplace_back(c.error_rate, it->second);
  }
  return out;
}

}  // namespace calorie
