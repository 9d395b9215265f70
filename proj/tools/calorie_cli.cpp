// calorie: command-line front end for the calorie estimation pipeline.
//
//   profile   mask / silhouette -> profile.tsv
//   energy    skeleton.csv + profile.tsv + weight -> energy.tsv
//   synth     analytic motion -> skeleton.csv (and its closed-form energy)
//   train     sessions + subjects + streams -> model.tsv
//   predict   model.tsv + energy.tsv -> kcal
//   evaluate  exercise-indexed cross validation (or ingest a report) -> report
//   compare   two reports -> Wilcoxon signed-rank line
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "calorie/eval.hpp"
#include "calorie/io.hpp"
#include "calorie/kinetics.hpp"
#include "calorie/mass.hpp"
#include "calorie/regression.hpp"
#include "calorie/synth.hpp"

namespace fs = std::filesystem;
using namespace calorie;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  out << content;
}

/// Parses a file, prefixing any error with its path.
template <class F>
auto parse_file(const fs::path& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const std::exception& e) {
    throw FileError(path.string() + ": " + e.what());
  }
}

/// Six significant digits in fixed notation.
std::string sig6(double value) {
  if (value == 0.0 || !std::isfinite(value)) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(5) << value;
    return ss.str();
  }
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(std::max(0, 5 - magnitude)) << value;
  return ss.str();
}

struct Dataset {
  std::vector<SubjectRecord> subjects;
  io::SessionTable sessions;
  StreamTable streams;
};

Dataset load_dataset(const fs::path& sessions_path, const fs::path& subjects_path, const fs::path& stream_dir) {
  Dataset d;
  const fs::path profile_root = subjects_path.parent_path();
  d.subjects = parse_file(subjects_path, [&](const std::string& text) {
    return io::parse_subjects_csv(text, [&](const std::string& ref) {
      if (ref == "standard") return standard_profile();
      return io::parse_profile_tsv(read_file(profile_root / ref));
    });
  });
  d.sessions = parse_file(sessions_path, [&](const std::string& text) {
    return io::parse_sessions_csv(text, d.subjects);
  });
  for (const auto& w : d.sessions.warnings) std::cerr << "warning: " << sessions_path.string() << ": " << w << "\n";
  for (const auto& s : d.sessions.records) {
    if (d.streams.contains(s.stream_ref)) continue;
    d.streams.emplace(s.stream_ref, parse_file(stream_dir / s.stream_ref, [](const std::string& text) {
                        return io::parse_skeleton_csv(text);
                      }));
  }
  return d;
}

std::map<std::string, MassMethod> method_map() {
  return {{"personalized", MassMethod::Personalized}, {"standard", MassMethod::StandardScale}};
}

std::string rate_table(const ErrorReport& report) {
  std::vector<std::string> subjects;
  std::vector<int> indices;
  std::map<std::string, double> rate;
  for (const auto& c : report.cells) {
    if (std::find(subjects.begin(), subjects.end(), c.subject_id) == subjects.end()) subjects.push_back(c.subject_id);
    if (std::find(indices.begin(), indices.end(), c.exercise_index) == indices.end()) {
      indices.push_back(c.exercise_index);
    }
    rate[session_key(c.subject_id, c.exercise_index)] = c.error_rate;
  }
  std::sort(indices.begin(), indices.end());

  std::ostringstream out;
  out << "method\t" << (report.method.empty() ? "-" : report.method) << "\n";
  out << "subject";
  for (int i : indices) out << "\texercise_" << i;
  out << "\n";
  for (const auto& s : subjects) {
    out << s;
    for (int i : indices) {
      const auto it = rate.find(session_key(s, i));
      out << "\t" << (it == rate.end() ? std::string("-") : sig6(it->second));
    }
    out << "\n";
  }
  for (const auto& f : report.folds) {
    out << "fold\t" << f.held_out_index << "\ttrain=" << f.train_keys.size() << "\ttest=" << f.test_keys.size()
        << "\n";
  }
  out << "Avg.\t" << sig6(report.mean()) << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized calorie consumption estimation from skeleton motion"};
  app.require_subcommand(1);

  // profile
  auto* profile = app.add_subcommand("profile", "Build a mass profile (profile.tsv)");
  std::string mask_path, silhouette_path, joints_path, profile_out;
  bool use_standard = false;
  auto* opt_mask = profile->add_option("--mask", mask_path, "Labeled segmentation mask (text grid or PGM)");
  auto* opt_sil = profile->add_option("--silhouette", silhouette_path, "Binary silhouette (text grid or PGM)");
  auto* opt_joints = profile->add_option("--joints", joints_path, "Joint pixel coordinates: <joint>\\t<u>\\t<v>");
  auto* opt_std = profile->add_flag("--standard", use_standard, "Emit the built-in standard scale");
  profile->add_option("-o,--output", profile_out, "Output path (default: stdout)");
  opt_mask->excludes(opt_sil)->excludes(opt_std);
  opt_sil->excludes(opt_std)->needs(opt_joints);
  opt_joints->needs(opt_sil);

  // energy
  auto* energy = app.add_subcommand("energy", "Accumulate per-joint kinetic energy (energy.tsv)");
  std::string skeleton_path, energy_profile, energy_out;
  double weight = 0.0;
  energy->add_option("--skeleton", skeleton_path, "Skeleton stream CSV")->required();
  energy->add_option("--profile", energy_profile, "Mass profile TSV, or 'standard'")->required();
  energy->add_option("--weight", weight, "Subject weight in kg")->required();
  energy->add_option("-o,--output", energy_out, "Output path (default: stdout)");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate an analytic skeleton stream (skeleton.csv)");
  std::string motion = "stationary", axis_name = "x", synth_out, oracle_out, oracle_profile = "standard";
  double duration = 1.0, fps = SkeletonStream::kDefaultFps, amplitude = 0.1, omega = 2.0 * M_PI, jitter = 0.0,
         oracle_weight = 60.0;
  std::vector<double> velocity{1.0, 0.0, 0.0};
  std::uint64_t seed = 0;
  synth_cmd->add_option("--motion", motion, "Motion applied to every joint")
      ->check(CLI::IsMember({"stationary", "constant", "sinusoid"}));
  synth_cmd->add_option("--duration", duration, "Duration in seconds")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--fps", fps, "Frames per second")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--velocity", velocity, "Constant velocity vx vy vz (m/s)")->expected(3);
  synth_cmd->add_option("--amplitude", amplitude, "Sinusoid amplitude (m)");
  synth_cmd->add_option("--omega", omega, "Sinusoid angular frequency (rad/s)");
  synth_cmd->add_option("--axis", axis_name, "Sinusoid axis")->check(CLI::IsMember({"x", "y", "z"}));
  synth_cmd->add_option("--jitter", jitter, "Gaussian position noise std-dev (m), 0 = off")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", seed, "Noise seed");
  synth_cmd->add_option("-o,--output", synth_out, "Skeleton CSV path (default: stdout)");
  synth_cmd->add_option("--expected-energy", oracle_out, "Also write the closed-form energy.tsv here");
  synth_cmd->add_option("--profile", oracle_profile, "Profile for --expected-energy, or 'standard'");
  synth_cmd->add_option("--weight", oracle_weight, "Weight (kg) for --expected-energy");

  // train
  auto* train = app.add_subcommand("train", "Fit a calorie model (model.tsv)");
  std::string sessions_path, subjects_path, stream_dir = ".", method_name_arg = "personalized", model_out;
  MassMethod method = MassMethod::Personalized;
  train->add_option("--sessions", sessions_path, "sessions.csv")->required();
  train->add_option("--subjects", subjects_path, "subjects.csv")->required();
  train->add_option("--stream-dir", stream_dir, "Root for stream_ref paths");
  train->add_option("--method", method, "Mass profile method")->transform(CLI::CheckedTransformer(method_map()));
  train->add_option("-o,--output", model_out, "Output path (default: stdout)");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Predict kcal from a model and an energy vector");
  std::string model_path, energy_path;
  predict_cmd->add_option("--model", model_path, "model.tsv")->required();
  predict_cmd->add_option("--energy", energy_path, "energy.tsv")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate by exercise index, or summarize a report");
  int folds = 3;
  bool training_only = false;
  std::string rates_path, report_out;
  auto* opt_rates = evaluate->add_option("--rates", rates_path, "Ingest an existing report instead of running");
  auto* opt_sessions = evaluate->add_option("--sessions", sessions_path, "sessions.csv");
  auto* opt_subjects = evaluate->add_option("--subjects", subjects_path, "subjects.csv");
  evaluate->add_option("--stream-dir", stream_dir, "Root for stream_ref paths");
  evaluate->add_option("--k", folds, "Number of folds (= distinct exercise indices)")->check(CLI::PositiveNumber);
  evaluate->add_option("--method", method, "Mass profile method")->transform(CLI::CheckedTransformer(method_map()));
  evaluate->add_flag("--training", training_only, "Report error on the training data instead of folds");
  evaluate->add_option("-o,--output", report_out, "Write the machine-readable report here");
  opt_rates->excludes(opt_sessions)->excludes(opt_subjects);
  opt_sessions->needs(opt_subjects);
  opt_subjects->needs(opt_sessions);

  // compare
  auto* compare = app.add_subcommand("compare", "Wilcoxon signed-rank test between two reports");
  std::string report_a, report_b, test_name = "auto";
  compare->add_option("report_a", report_a, "First report (e.g. personalized)")->required();
  compare->add_option("report_b", report_b, "Second report (e.g. standard)")->required();
  compare->add_option("--test", test_name, "auto: exact for n <= 25, else normal")
      ->check(CLI::IsMember({"auto", "exact", "normal"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto load_profile = [](const std::string& ref) {
    if (ref == "standard") return standard_profile();
    return parse_file(ref, [](const std::string& text) { return io::parse_profile_tsv(text); });
  };

  try {
    if (*profile) {
      MassProfile result = standard_profile();
      if (!mask_path.empty()) {
        result = profile_from_mask(parse_file(mask_path, [](const std::string& t) { return io::parse_mask(t); }));
      } else if (!silhouette_path.empty()) {
        const auto sil = parse_file(silhouette_path, [](const std::string& t) { return io::parse_silhouette(t); });
        const auto joints = parse_file(joints_path, [](const std::string& t) { return io::parse_joints2d(t); });
        result = profile_from_mask(segment_silhouette(sil, joints));
      } else if (!use_standard) {
        std::cerr << "profile: one of --mask, --silhouette/--joints or --standard is required\n";
        return kExitUsage;
      }
      write_output(profile_out, io::write_profile_tsv(result));
    } else if (*energy) {
      const auto stream =
          parse_file(skeleton_path, [](const std::string& t) { return io::parse_skeleton_csv(t); });
      const SubjectRecord subject("cli", weight, load_profile(energy_profile));
      write_output(energy_out, io::write_energy_tsv(session_energy(stream, subject)));
    } else if (*synth_cmd) {
      synth::Motion m = synth::Stationary{};
      if (motion == "constant") {
        m = synth::ConstantVelocity{{velocity[0], velocity[1], velocity[2]}};
      } else if (motion == "sinusoid") {
        const synth::Axis axis = axis_name == "x" ? synth::Axis::X : axis_name == "y" ? synth::Axis::Y : synth::Axis::Z;
        m = synth::Sinusoid{amplitude, omega, axis};
      }
      synth::MotionSpec spec{JointMap<synth::Motion>(m), duration, fps, jitter, seed};
      write_output(synth_out, io::write_skeleton_csv(synth::generate(spec, synth::default_pose())));
      if (!oracle_out.empty()) {
        const auto masses = mass_of(load_profile(oracle_profile), oracle_weight);
        write_output(oracle_out, io::write_energy_tsv(synth::expected_energy(spec, masses)));
      }
    } else if (*train) {
      const auto d = load_dataset(sessions_path, subjects_path, stream_dir);
      const auto rows = session_rows(d.sessions.records, d.subjects, d.streams, method);
      write_output(model_out, io::write_model_tsv(fit(TrainingSet(rows))));
    } else if (*predict_cmd) {
      const auto model = parse_file(model_path, [](const std::string& t) { return io::parse_model_tsv(t); });
      const auto k = parse_file(energy_path, [](const std::string& t) { return io::parse_energy_tsv(t); });
      std::cout << io::format_double(predict(model, k)) << "\n";
    } else if (*evaluate) {
      ErrorReport report;
      if (!rates_path.empty()) {
        report = parse_file(rates_path, [](const std::string& t) { return io::parse_report_tsv(t); });
      } else if (!sessions_path.empty()) {
        const auto d = load_dataset(sessions_path, subjects_path, stream_dir);
        report = training_only ? training_errors(d.sessions.records, d.subjects, d.streams, method)
                               : cross_validate(d.sessions.records, d.subjects, d.streams, folds, method);
      } else {
        std::cerr << "evaluate: either --rates or --sessions/--subjects is required\n";
        return kExitUsage;
      }
      if (!report_out.empty()) write_output(report_out, io::write_report_tsv(report));
      std::cout << rate_table(report);
    } else if (*compare) {
      const auto a = parse_file(report_a, [](const std::string& t) { return io::parse_report_tsv(t); });
      const auto b = parse_file(report_b, [](const std::string& t) { return io::parse_report_tsv(t); });
      const WilcoxonMethod wm = test_name == "exact"    ? WilcoxonMethod::Exact
                                : test_name == "normal" ? WilcoxonMethod::NormalApprox
                                                        : WilcoxonMethod::Auto;
      const auto r = wilcoxon_signed_rank(paired_rates(a, b), wm);
      std::cout << "wilcoxon\tn=" << r.n_effective << "\tW+=" << r.w_plus << "\tW-=" << r.w_minus
                << "\tW=" << r.statistic << "\tp=" << sig6(r.p_value)
                << "\tmethod=" << (r.method == WilcoxonMethod::Exact ? "exact" : "normal")
                << (r.degenerate ? "\tdegenerate" : "") << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
