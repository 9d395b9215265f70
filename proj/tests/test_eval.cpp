#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "calorie/eval.hpp"
#include "calorie/io.hpp"
#include "calorie/kinetics.hpp"
#include "oracles.hpp"
#include "synthetic_dataset.hpp"

using namespace calorie;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CALORIE_FIXTURE_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::pair<double, double>> reference_pairs() {
  return paired_rates(io::parse_report_tsv(slurp("reference_rates_personalized.tsv")),
                      io::parse_report_tsv(slurp("reference_rates_standard.tsv")));
}

}  // namespace

TEST_CASE("error_rate") {
  CHECK(error_rate(16.0, 16.0) == 0.0);
  CHECK(error_rate(20.0, 15.0) == 0.25);
  CHECK(error_rate(20.0, 25.0) == 0.25);
  CHECK_THROWS_AS(error_rate(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(error_rate(-5.0, 1.0), ValidationError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.5, 50.0);
  for (int i = 0; i < 100; ++i) {
    const double t = d(rng), p = d(rng), c = d(rng);
    CHECK(error_rate(c * t, c * p) == doctest::Approx(error_rate(t, p)).epsilon(1e-12));
  }
}

TEST_CASE("reference rate tables: grand means") {
  const auto ours = io::parse_report_tsv(slurp("reference_rates_personalized.tsv"));
  const auto base = io::parse_report_tsv(slurp("reference_rates_standard.tsv"));
  CHECK(ours.cells.size() == 18);
  CHECK(base.cells.size() == 18);
  CHECK(std::abs(ours.mean() - 0.1835) <= 0.00005);
  CHECK(std::abs(base.mean() - 0.3207) <= 0.00005);
}

TEST_CASE("Wilcoxon on the reference rate pairs") {
  const auto pairs = reference_pairs();
  const auto exact = wilcoxon_signed_rank(pairs);
  CHECK(exact.method == WilcoxonMethod::Exact);
  CHECK(exact.n_effective == 18);
  CHECK(exact.w_plus == 25.0);
  CHECK(exact.w_minus == 146.0);
  CHECK(exact.statistic == 25.0);
  // Frozen from scipy.stats.wilcoxon(method="exact") and checked by enumeration.
  CHECK(exact.p_value == doctest::Approx(0.0065765380859375).epsilon(1e-12));
  CHECK(exact.p_value == doctest::Approx(oracle::wilcoxon_enumerated_p(pairs)).epsilon(1e-12));

  const auto normal = wilcoxon_signed_rank(pairs, WilcoxonMethod::NormalApprox);
  CHECK(normal.method == WilcoxonMethod::NormalApprox);
  // Frozen from scipy.stats.wilcoxon(method="approx", correction=False).
  CHECK(normal.p_value == doctest::Approx(0.008418773595809824).epsilon(1e-10));
}

TEST_CASE("Wilcoxon small cases") {
  SUBCASE("all equal pairs are degenerate") {
    const std::vector<std::pair<double, double>> p{{1, 1}, {2, 2}, {0.3, 0.3}};
    const auto r = wilcoxon_signed_rank(p);
    CHECK(r.degenerate);
    CHECK(r.p_value == 1.0);
    CHECK(r.n_effective == 0);
  }
  SUBCASE("five positive distinct differences") {
    const std::vector<std::pair<double, double>> p{{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}};
    const auto r = wilcoxon_signed_rank(p);
    CHECK(r.p_value == doctest::Approx(2.0 / 32.0).epsilon(1e-15));
    CHECK(r.w_plus == 15.0);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == doctest::Approx(oracle::wilcoxon_enumerated_p(p)).epsilon(1e-15));
  }
  SUBCASE("zero differences are dropped") {
    const std::vector<std::pair<double, double>> p{{1, 0}, {2, 2}, {3, 0}};
    CHECK(wilcoxon_signed_rank(p).n_effective == 2);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<std::pair<double, double>>{}), ValidationError);
  }
}

TEST_CASE("Wilcoxon exact matches enumeration, including ties") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      // small integer grid so ties and zeros appear
      pairs.emplace_back(static_cast<double>(rng() % 7), static_cast<double>(rng() % 7));
    }
    const auto r = wilcoxon_signed_rank(pairs, WilcoxonMethod::Exact);
    CHECK(r.p_value == doctest::Approx(oracle::wilcoxon_enumerated_p(pairs)).epsilon(1e-12));
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    const double nn = static_cast<double>(r.n_effective);
    CHECK(r.statistic >= 0.0);
    CHECK(r.statistic <= nn * (nn + 1) / 2);
  }
}

TEST_CASE("Wilcoxon invariances") {
  const auto pairs = reference_pairs();
  const double p = wilcoxon_signed_rank(pairs).p_value;
  for (auto method : {WilcoxonMethod::Exact, WilcoxonMethod::NormalApprox}) {
    const double base = wilcoxon_signed_rank(pairs, method).p_value;
    std::vector<std::pair<double, double>> swapped, scaled;
    for (const auto& [a, b] : pairs) {
      swapped.emplace_back(b, a);
      scaled.emplace_back(3.5 * a, 3.5 * b);
    }
    CHECK(wilcoxon_signed_rank(swapped, method).p_value == doctest::Approx(base).epsilon(1e-14));
    CHECK(wilcoxon_signed_rank(scaled, method).p_value == doctest::Approx(base).epsilon(1e-14));
  }
  CHECK(p > 0.0);
}

TEST_CASE("signed-rank null distribution sums to one") {
  for (int n = 1; n <= 10; ++n) {
    std::vector<int> doubled;
    for (int r = 1; r <= n; ++r) doubled.push_back(2 * r);
    const auto dist = signed_rank_null_distribution(doubled);
    double total = 0.0;
    for (double q : dist) total += q;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dist.size() == static_cast<std::size_t>(n * (n + 1) + 1));
  }
}

TEST_CASE("cross_validate holds out one exercise index per fold") {
  const auto d = testdata::make_dataset(6, 3, 99, 2.0);
  const auto report = cross_validate(d.sessions, d.subjects, d.streams, 3, MassMethod::Personalized);
  REQUIRE(report.folds.size() == 3);
  for (int f = 0; f < 3; ++f) {
    const auto& fold = report.folds[static_cast<std::size_t>(f)];
    CHECK(fold.held_out_index == f + 1);
    CHECK(fold.train_keys.size() == 12);
    CHECK(fold.test_keys.size() == 6);
    for (const auto& k : fold.test_keys) CHECK(k.ends_with(":" + std::to_string(f + 1)));
    for (const auto& k : fold.train_keys) CHECK_FALSE(k.ends_with(":" + std::to_string(f + 1)));
  }
  CHECK(report.cells.size() == 18);
  CHECK(report.cells.front().subject_id == "Sub.1");
  CHECK(report.cells.front().exercise_index == 1);
  double sum = 0.0;
  for (const auto& c : report.cells) sum += c.error_rate;
  CHECK(report.mean() == doctest::Approx(sum / 18.0).epsilon(1e-12));
}

TEST_CASE("cross_validate degenerate fixture: identical sessions with equal targets") {
  const auto d = testdata::make_dataset(1, 1, 5, 2.0);
  std::vector<SessionRecord> sessions;
  for (int e = 1; e <= 3; ++e) sessions.push_back({"Sub.1", e, 5.0, 20.0, d.sessions[0].stream_ref});
  const auto report = cross_validate(sessions, d.subjects, d.streams, 3, MassMethod::Personalized);
  for (const auto& c : report.cells) {
    CHECK(*c.predicted == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(c.error_rate <= 1e-9);
  }
}

TEST_CASE("cross_validate method only changes the mass profile") {
  auto d = testdata::make_dataset(4, 3, 12, 2.0);
  std::vector<SubjectRecord> standardized;
  for (const auto& s : d.subjects) {
    standardized.emplace_back(s.subject_id, s.weight_kg,
                              MassProfile(standard_profile().fractions(), ProfileSource::Personalized));
  }
  const auto a = cross_validate(d.sessions, standardized, d.streams, 3, MassMethod::Personalized);
  const auto b = cross_validate(d.sessions, standardized, d.streams, 3, MassMethod::StandardScale);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].error_rate == b.cells[i].error_rate);

  const auto c = cross_validate(d.sessions, d.subjects, d.streams, 3, MassMethod::Personalized);
  CHECK(c.mean() != a.mean());
}

TEST_CASE("cross_validate rejects unbalanced or mismatched input") {
  auto d = testdata::make_dataset(2, 3, 3, 1.0);
  CHECK_THROWS_AS(cross_validate(d.sessions, d.subjects, d.streams, 2, MassMethod::Personalized), ValidationError);
  auto unbalanced = d.sessions;
  unbalanced.pop_back();
  CHECK_THROWS_AS(cross_validate(unbalanced, d.subjects, d.streams, 3, MassMethod::Personalized), ValidationError);
  auto dup = d.sessions;
  dup.push_back(dup.front());
  CHECK_THROWS_AS(cross_validate(dup, d.subjects, d.streams, 3, MassMethod::Personalized), ValidationError);
  auto missing = d.streams;
  missing.erase(d.sessions[0].stream_ref);
  CHECK_THROWS_AS(cross_validate(d.sessions, d.subjects, missing, 3, MassMethod::Personalized), ValidationError);
}

TEST_CASE("training_errors interpolates the 18-session regime") {
  const auto d = testdata::make_dataset(6, 3, 77);
  for (auto method : {MassMethod::Personalized, MassMethod::StandardScale}) {
    const auto report = training_errors(d.sessions, d.subjects, d.streams, method);
    CHECK(report.cells.size() == 18);
    for (const auto& c : report.cells) CHECK(c.error_rate <= 1e-4);
  }
}

TEST_CASE("paired_rates requires matching cells") {
  ErrorReport a{"a", {{"s", 1, 0.1, {}, {}}, {"s", 2, 0.2, {}, {}}}, {}};
  ErrorReport b{"b", {{"s", 2, 0.3, {}, {}}, {"s", 1, 0.4, {}, {}}}, {}};
  const auto p = paired_rates(a, b);
  CHECK(p == std::vector<std::pair<double, double>>{{0.1, 0.4}, {0.2, 0.3}});
  b.cells.pop_back();
  CHECK_THROWS_AS(paired_rates(a, b), ValidationError);
}
