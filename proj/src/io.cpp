#include "calorie/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace calorie::io {

ParseError::ParseError(std::size_t line, std::string column, const std::string& message)
    : std::runtime_error([&] {
        std::string where;
        if (line > 0) where = "line " + std::to_string(line);
        if (!column.empty()) where += (where.empty() ? "" : ", ") + std::string("column ") + column;
        return where.empty() ? message : where + ": " + message;
      }()),
      line_(line),
      column_(std::move(column)) {}

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Non-blank lines with their 1-based numbers; trailing '\r' removed.
std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) out.push_back({number, line});
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(delim);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double to_double(std::string_view field, std::size_t line, const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(line, column, "expected a number, got '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, column, "value must be finite");
  return value;
}

long to_long(std::string_view field, std::size_t line, const std::string& column) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, column, "expected an integer, got '" + std::string(field) + "'");
  }
  return value;
}

bool is_comment(const Line& l) { return trim(l.text).starts_with('#'); }

/// Reads an optional `# calorie-<kind> v<N> key=value ...` header from the
/// first line and returns its key=value options.
std::map<std::string, std::string> read_header(const std::vector<Line>& lines, std::string_view kind) {
  std::map<std::string, std::string> options;
  if (lines.empty() || !is_comment(lines.front())) return options;
  auto tokens = split_ws(trim(lines.front().text).substr(1));
  if (tokens.empty() || !tokens[0].starts_with("calorie-")) return options;
  const std::string expected = "calorie-" + std::string(kind);
  if (tokens[0] != expected) {
    throw ParseError(lines.front().number, "", "expected a " + expected + " file, found " + std::string(tokens[0]));
  }
  if (tokens.size() < 2 || !tokens[1].starts_with('v')) {
    throw ParseError(lines.front().number, "", "header is missing a format version");
  }
  const long version = to_long(tokens[1].substr(1), lines.front().number, "version");
  if (version != kFormatVersion) {
    throw ParseError(lines.front().number, "",
                     "unsupported format version " + std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");
  }
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) continue;
    options.emplace(std::string(tokens[i].substr(0, eq)), std::string(tokens[i].substr(eq + 1)));
  }
  return options;
}

std::string header(std::string_view kind, std::string_view extra = {}) {
  std::string out = "# calorie-" + std::string(kind) + " v" + std::to_string(kFormatVersion);
  if (!extra.empty()) out += " " + std::string(extra);
  return out + "\n";
}

std::vector<Line> data_lines(const std::vector<Line>& lines) {
  std::vector<Line> out;
  std::copy_if(lines.begin(), lines.end(), std::back_inserter(out), [](const Line& l) { return !is_comment(l); });
  return out;
}

/// Reads `<joint_name>\t<value>` rows covering every joint exactly once.
JointMap<double> read_joint_table(const std::vector<Line>& rows, std::string_view what) {
  JointMap<double> values;
  std::set<JointId> seen;
  for (const auto& row : rows) {
    const auto fields = split(row.text, '\t');
    if (fields.size() != 2) throw ParseError(row.number, "", "expected '<joint>\\t<" + std::string(what) + ">'");
    const auto joint = joint_from_name(fields[0]);
    if (!joint) throw ParseError(row.number, "1", "unknown joint '" + std::string(fields[0]) + "'");
    if (!seen.insert(*joint).second) throw ParseError(row.number, "1", "duplicate joint " + std::string(fields[0]));
    values[*joint] = to_double(fields[1], row.number, "2");
  }
  for (JointId j : kAllJoints) {
    if (!seen.contains(j)) throw ParseError(0, "", "missing row for joint " + std::string(joint_name(j)));
  }
  return values;
}

std::string write_joint_table(const JointMap<double>& values) {
  std::string out;
  for (JointId j : kAllJoints) out += std::string(joint_name(j)) + "\t" + format_double(values[j]) + "\n";
  return out;
}

struct Grid {
  std::size_t width{0};
  std::size_t height{0};
  std::vector<long> values;
};

bool is_pgm(std::string_view bytes) {
  return bytes.size() >= 3 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5') &&
         std::isspace(static_cast<unsigned char>(bytes[2]));
}

Grid parse_pgm(std::string_view bytes) {
  const bool binary = bytes[1] == '5';
  std::size_t pos = 2;
  auto next_token = [&]() -> std::string_view {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw ParseError(0, "", "truncated PGM data");
    return bytes.substr(start, pos - start);
  };

  Grid grid;
  const long w = to_long(next_token(), 0, "width");
  const long h = to_long(next_token(), 0, "height");
  const long maxval = to_long(next_token(), 0, "maxval");
  if (w <= 0 || h <= 0) throw ParseError(0, "", "PGM dimensions must be positive");
  if (maxval <= 0 || maxval > 65535) throw ParseError(0, "", "PGM maxval out of range");
  grid.width = static_cast<std::size_t>(w);
  grid.height = static_cast<std::size_t>(h);
  const std::size_t count = grid.width * grid.height;
  grid.values.reserve(count);

  if (binary) {
    ++pos;  // single whitespace byte after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + count * bpp) throw ParseError(0, "", "truncated PGM pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      const auto hi = static_cast<unsigned char>(bytes[pos + i * bpp]);
      const long v = bpp == 1 ? hi : (hi << 8) | static_cast<unsigned char>(bytes[pos + i * bpp + 1]);
      grid.values.push_back(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      grid.values.push_back(to_long(next_token(), i / grid.width + 1, std::to_string(i % grid.width + 1)));
    }
  }
  return grid;
}

Grid parse_text_grid(std::string_view text) {
  Grid grid;
  for (const auto& line : lines_of(text)) {
    if (is_comment(line)) continue;
    const auto cells = split_ws(line.text);
    if (grid.height == 0) {
      grid.width = cells.size();
    } else if (cells.size() != grid.width) {
      throw ParseError(line.number, "", "row has " + std::to_string(cells.size()) + " cells, expected " +
                                            std::to_string(grid.width));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      grid.values.push_back(to_long(cells[c], line.number, std::to_string(c + 1)));
    }
    ++grid.height;
  }
  if (grid.height == 0) throw ParseError(0, "", "empty grid");
  return grid;
}

Grid parse_grid(std::string_view bytes) { return is_pgm(bytes) ? parse_pgm(bytes) : parse_text_grid(bytes); }

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

// ---------------------------------------------------------------- skeleton

SkeletonStream parse_skeleton_csv(std::string_view text) {
  const auto lines = lines_of(text);
  const auto options = read_header(lines, "skeleton");
  const auto rows = data_lines(lines);
  if (rows.empty()) throw ParseError(0, "", "missing header row");

  // column index for t and for each (joint, axis)
  const auto names = split(rows.front().text, ',');
  std::optional<std::size_t> t_col;
  JointMap<std::array<std::optional<std::size_t>, 3>> cols;
  constexpr std::array<std::string_view, 3> kAxes = {"_x", "_y", "_z"};
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto name = names[c];
    if (name == "t") {
      t_col = c;
      continue;
    }
    bool matched = false;
    for (std::size_t a = 0; a < 3 && !matched; ++a) {
      if (name.size() > 2 && name.ends_with(kAxes[a])) {
        if (const auto j = joint_from_name(name.substr(0, name.size() - 2))) {
          if (cols[*j][a]) throw ParseError(rows.front().number, std::string(name), "duplicate column");
          cols[*j][a] = c;
          matched = true;
        }
      }
    }
    if (!matched) throw ParseError(rows.front().number, std::string(name), "unknown column");
  }
  if (!t_col) throw ParseError(rows.front().number, "t", "missing timestamp column");
  for (JointId j : kAllJoints) {
    for (std::size_t a = 0; a < 3; ++a) {
      if (!cols[j][a]) {
        throw ParseError(rows.front().number, std::string(joint_name(j)) + std::string(kAxes[a]), "missing column");
      }
    }
  }

  std::vector<JointFrame> frames;
  frames.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto fields = split(row.text, ',');
    if (fields.size() != names.size()) {
      throw ParseError(row.number, "", "expected " + std::to_string(names.size()) + " fields, got " +
                                           std::to_string(fields.size()));
    }
    JointFrame frame;
    frame.t = to_double(fields[*t_col], row.number, "t");
    if (frame.t < 0.0) throw ParseError(row.number, "t", "timestamp must be non-negative");
    if (!frames.empty() && !(frame.t > frames.back().t)) {
      throw ParseError(row.number, "t", "timestamps must be strictly increasing");
    }
    for (JointId j : kAllJoints) {
      auto& p = frame.positions[j];
      double* axes[3] = {&p.x, &p.y, &p.z};
      for (std::size_t a = 0; a < 3; ++a) {
        const std::size_t c = *cols[j][a];
        *axes[a] = to_double(fields[c], row.number, std::string(names[c]));
      }
    }
    frames.push_back(frame);
  }

  double fps = SkeletonStream::kDefaultFps;
  if (const auto it = options.find("fps"); it != options.end()) {
    fps = to_double(it->second, lines.front().number, "fps");
    if (fps <= 0.0) throw ParseError(lines.front().number, "fps", "fps must be positive");
  } else if (frames.size() >= 2) {
    const double est = static_cast<double>(frames.size() - 1) / (frames.back().t - frames.front().t);
    fps = std::round(est * 1e6) / 1e6;
  }
  return SkeletonStream(std::move(frames), fps);
}

std::string write_skeleton_csv(const SkeletonStream& stream) {
  std::string out = header("skeleton", "fps=" + format_double(stream.nominal_fps()));
  out += "t";
  for (JointId j : kAllJoints) {
    const std::string n(joint_name(j));
    out += "," + n + "_x," + n + "_y," + n + "_z";
  }
  out += "\n";
  for (const auto& f : stream.frames()) {
    out += format_double(f.t);
    for (JointId j : kAllJoints) {
      const auto& p = f.positions[j];
      out += "," + format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- masks

SegmentationMask parse_mask(std::string_view bytes) {
  const Grid grid = parse_grid(bytes);
  SegmentationMask mask{grid.width, grid.height, {}};
  mask.labels.reserve(grid.values.size());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const long v = grid.values[i];
    if (v < 0 || v > static_cast<long>(kJointCount)) {
      throw ParseError(i / grid.width + 1, std::to_string(i % grid.width + 1),
                       "label " + std::to_string(v) + " outside 0..20");
    }
    mask.labels.push_back(static_cast<std::uint8_t>(v));
  }
  if (mask.foreground_count() == 0) throw ValidationError("mask has no foreground pixels");
  return mask;
}

std::string write_mask_text(const SegmentationMask& mask) {
  std::string out;
  for (std::size_t row = 0; row < mask.height; ++row) {
    for (std::size_t col = 0; col < mask.width; ++col) {
      if (col > 0) out += ' ';
      out += std::to_string(mask.at(col, row));
    }
    out += '\n';
  }
  return out;
}

Silhouette parse_silhouette(std::string_view bytes) {
  const Grid grid = parse_grid(bytes);
  Silhouette sil{grid.width, grid.height, std::vector<bool>(grid.values.size())};
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.values[i] < 0) {
      throw ParseError(i / grid.width + 1, std::to_string(i % grid.width + 1), "negative pixel value");
    }
    sil.foreground[i] = grid.values[i] != 0;
  }
  if (std::none_of(sil.foreground.begin(), sil.foreground.end(), [](bool b) { return b; })) {
    throw ValidationError("silhouette has no foreground pixels");
  }
  return sil;
}

JointMap<PixelCoord> parse_joints2d(std::string_view text) {
  JointMap<PixelCoord> out;
  std::set<JointId> seen;
  for (const auto& row : data_lines(lines_of(text))) {
    const auto fields = split(row.text, '\t');
    if (fields.size() != 3) throw ParseError(row.number, "", "expected '<joint>\\t<u>\\t<v>'");
    const auto j = joint_from_name(fields[0]);
    if (!j) throw ParseError(row.number, "1", "unknown joint '" + std::string(fields[0]) + "'");
    if (!seen.insert(*j).second) throw ParseError(row.number, "1", "duplicate joint");
    out[*j] = {to_double(fields[1], row.number, "u"), to_double(fields[2], row.number, "v")};
  }
  for (JointId j : kAllJoints) {
    if (!seen.contains(j)) throw ParseError(0, "", "missing pixel coordinates for " + std::string(joint_name(j)));
  }
  return out;
}

// ---------------------------------------------------------------- profiles, energies, models

MassProfile parse_profile_tsv(std::string_view text) {
  const auto lines = lines_of(text);
  const auto options = read_header(lines, "profile");
  ProfileSource source = ProfileSource::Personalized;
  if (const auto it = options.find("source"); it != options.end()) {
    if (it->second == "standard") {
      source = ProfileSource::Standard;
    } else if (it->second != "personalized") {
      throw ParseError(lines.front().number, "source", "unknown profile source '" + it->second + "'");
    }
  }
  const auto fractions = read_joint_table(data_lines(lines), "fraction");
  try {
    return MassProfile(fractions, source);
  } catch (const ValidationError& e) {
    throw ParseError(0, "", e.what());
  }
}

std::string write_profile_tsv(const MassProfile& profile) {
  return header("profile", profile.source() == ProfileSource::Standard ? "source=standard" : "source=personalized") +
         write_joint_table(profile.fractions());
}

EnergyVector parse_energy_tsv(std::string_view text) {
  const auto lines = lines_of(text);
  read_header(lines, "energy");
  EnergyVector ev{read_joint_table(data_lines(lines), "joules")};
  for (double k : ev.energies) {
    if (k < 0.0) throw ParseError(0, "", "accumulated energy must be non-negative");
  }
  return ev;
}

std::string write_energy_tsv(const EnergyVector& energy) { return header("energy") + write_joint_table(energy.energies); }

CalorieModel parse_model_tsv(std::string_view text) {
  const auto lines = lines_of(text);
  read_header(lines, "model");
  CalorieModel model;
  std::vector<Line> coefficient_rows;
  bool have_bias = false;
  for (const auto& l : lines) {
    const auto t = trim(l.text);
    if (t.starts_with("#")) {
      const auto fields = split(t.substr(1), '\t');
      if (!fields.empty() && fields[0] == "trained_on") {
        for (std::size_t i = 1; i < fields.size(); ++i) model.training_keys.emplace_back(fields[i]);
      }
      continue;
    }
    const auto fields = split(l.text, '\t');
    if (!fields.empty() && fields[0] == "bias") {
      if (have_bias) throw ParseError(l.number, "1", "duplicate bias row");
      if (fields.size() != 2) throw ParseError(l.number, "", "expected 'bias\\t<value>'");
      model.bias = to_double(fields[1], l.number, "2");
      have_bias = true;
    } else {
      coefficient_rows.push_back(l);
    }
  }
  if (!have_bias) throw ParseError(0, "", "missing bias row");
  model.coefficients = read_joint_table(coefficient_rows, "coefficient");
  return model;
}

std::string write_model_tsv(const CalorieModel& model) {
  std::string out = header("model");
  if (!model.training_keys.empty()) {
    out += "# trained_on";
    for (const auto& k : model.training_keys) out += "\t" + k;
    out += "\n";
  }
  out += "bias\t" + format_double(model.bias) + "\n";
  return out + write_joint_table(model.coefficients);
}

// ---------------------------------------------------------------- reports

ErrorReport parse_report_tsv(std::string_view text) {
  const auto lines = lines_of(text);
  read_header(lines, "report");
  ErrorReport report;
  std::optional<std::pair<std::size_t, double>> stated_mean;
  std::set<std::string> keys;
  auto optional_number = [](std::string_view f, std::size_t line, const char* col) -> std::optional<double> {
    if (f == "-") return std::nullopt;
    return to_double(f, line, col);
  };
  auto key_list = [](std::string_view f) {
    std::vector<std::string> out;
    if (f.empty() || f == "-") return out;
    for (auto k : split(f, ',')) out.emplace_back(k);
    return out;
  };

  for (const auto& l : data_lines(lines)) {
    const auto f = split(l.text, '\t');
    if (f[0] == "method") {
      if (f.size() != 2) throw ParseError(l.number, "", "expected 'method\\t<name>'");
      report.method = std::string(f[1]);
    } else if (f[0] == "cell") {
      if (f.size() != 4 && f.size() != 6) {
        throw ParseError(l.number, "", "expected 'cell\\t<subject>\\t<exercise>\\t<rate>[\\t<truth>\\t<pred>]'");
      }
      ErrorCell cell;
      cell.subject_id = std::string(f[1]);
      cell.exercise_index = static_cast<int>(to_long(f[2], l.number, "exercise"));
      cell.error_rate = to_double(f[3], l.number, "rate");
      if (cell.error_rate < 0.0) throw ParseError(l.number, "rate", "error rate must be non-negative");
      if (f.size() == 6) {
        cell.truth = optional_number(f[4], l.number, "truth");
        cell.predicted = optional_number(f[5], l.number, "pred");
      }
      if (!keys.insert(session_key(cell.subject_id, cell.exercise_index)).second) {
        throw ParseError(l.number, "", "duplicate cell " + session_key(cell.subject_id, cell.exercise_index));
      }
      report.cells.push_back(std::move(cell));
    } else if (f[0] == "fold") {
      if (f.size() != 4) throw ParseError(l.number, "", "expected 'fold\\t<index>\\t<train keys>\\t<test keys>'");
      report.folds.push_back({static_cast<int>(to_long(f[1], l.number, "fold")), key_list(f[2]), key_list(f[3])});
    } else if (f[0] == "mean") {
      if (f.size() != 2) throw ParseError(l.number, "", "expected 'mean\\t<value>'");
      stated_mean = {l.number, to_double(f[1], l.number, "mean")};
    } else {
      throw ParseError(l.number, "1", "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  if (stated_mean && std::abs(stated_mean->second - report.mean()) > 1e-12 * std::max(1.0, report.mean())) {
    throw ParseError(stated_mean->first, "mean", "stated mean disagrees with the cell entries");
  }
  return report;
}

std::string write_report_tsv(const ErrorReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("-"); };
  auto join = [](const std::vector<std::string>& keys) {
    std::string out;
    for (const auto& k : keys) out += (out.empty() ? "" : ",") + k;
    return out.empty() ? std::string("-") : out;
  };
  std::string out = header("report");
  if (!report.method.empty()) out += "method\t" + report.method + "\n";
  for (const auto& c : report.cells) {
    out += "cell\t" + c.subject_id + "\t" + std::to_string(c.exercise_index) + "\t" + format_double(c.error_rate);
    if (c.truth || c.predicted) out += "\t" + opt(c.truth) + "\t" + opt(c.predicted);
    out += "\n";
  }
  for (const auto& fold : report.folds) {
    out += "fold\t" + std::to_string(fold.held_out_index) + "\t" + join(fold.train_keys) + "\t" +
           join(fold.test_keys) + "\n";
  }
  return out + "mean\t" + format_double(report.mean()) + "\n";
}

// ---------------------------------------------------------------- sessions and subjects

namespace {

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<Line> rows;
};

CsvTable read_csv(std::string_view text, std::initializer_list<std::string_view> required) {
  const auto rows = data_lines(lines_of(text));
  if (rows.empty()) throw ParseError(0, "", "missing header row");
  CsvTable table;
  const auto names = split(rows.front().text, ',');
  for (std::size_t c = 0; c < names.size(); ++c) table.columns[std::string(names[c])] = c;
  for (auto name : required) {
    if (!table.columns.contains(std::string(name))) {
      throw ParseError(rows.front().number, std::string(name), "missing column");
    }
  }
  table.rows.assign(rows.begin() + 1, rows.end());
  for (const auto& r : table.rows) {
    const auto n = split(r.text, ',').size();
    if (n != names.size()) {
      throw ParseError(r.number, "", "expected " + std::to_string(names.size()) + " fields, got " + std::to_string(n));
    }
  }
  return table;
}

}  // namespace

SessionTable parse_sessions_csv(std::string_view text, std::span<const SubjectRecord> subjects) {
  const auto table =
      read_csv(text, {"subject", "exercise_index", "rest_kcal", "exercise_kcal", "stream_ref"});
  SessionTable out;
  std::set<std::string> keys;
  for (const auto& row : table.rows) {
    const auto f = split(row.text, ',');
    auto field = [&](const char* name) { return f[table.columns.at(name)]; };
    SessionRecord s;
    s.subject_id = std::string(field("subject"));
    if (s.subject_id.empty()) throw ParseError(row.number, "subject", "empty subject id");
    if (std::none_of(subjects.begin(), subjects.end(),
                     [&](const SubjectRecord& r) { return r.subject_id == s.subject_id; })) {
      throw ParseError(row.number, "subject", "unknown subject '" + s.subject_id + "'");
    }
    const long index = to_long(field("exercise_index"), row.number, "exercise_index");
    if (index < 1) throw ParseError(row.number, "exercise_index", "exercise index must be >= 1");
    s.exercise_index = static_cast<int>(index);
    s.rest_kcal = to_double(field("rest_kcal"), row.number, "rest_kcal");
    if (s.rest_kcal < 0.0) throw ParseError(row.number, "rest_kcal", "kcal must be non-negative");
    s.exercise_kcal = to_double(field("exercise_kcal"), row.number, "exercise_kcal");
    if (s.exercise_kcal < 0.0) throw ParseError(row.number, "exercise_kcal", "kcal must be non-negative");
    s.stream_ref = std::string(field("stream_ref"));
    if (!keys.insert(session_key(s.subject_id, s.exercise_index)).second) {
      throw ParseError(row.number, "", "duplicate session " + session_key(s.subject_id, s.exercise_index));
    }
    if (!s.protocol_ok()) {
      std::ostringstream w;
      w << "line " << row.number << ": session " << session_key(s.subject_id, s.exercise_index)
        << " rests at " << format_double(s.rest_kcal) << " kcal, above its exercise value of "
        << format_double(s.exercise_kcal) << " kcal";
      out.warnings.push_back(w.str());
    }
    out.records.push_back(std::move(s));
  }
  return out;
}

std::vector<SubjectRecord> parse_subjects_csv(std::string_view text, const ProfileResolver& resolve) {
  const auto table = read_csv(text, {"subject", "weight_kg", "mass_profile_ref"});
  std::vector<SubjectRecord> out;
  for (const auto& row : table.rows) {
    const auto f = split(row.text, ',');
    auto field = [&](const char* name) { return f[table.columns.at(name)]; };
    const std::string id(field("subject"));
    if (id.empty()) throw ParseError(row.number, "subject", "empty subject id");
    if (std::any_of(out.begin(), out.end(), [&](const SubjectRecord& r) { return r.subject_id == id; })) {
      throw ParseError(row.number, "subject", "duplicate subject '" + id + "'");
    }
    const double weight = to_double(field("weight_kg"), row.number, "weight_kg");
    if (weight <= 0.0) throw ParseError(row.number, "weight_kg", "weight must be positive");
    const std::string ref(field("mass_profile_ref"));
    std::optional<MassProfile> profile;
    try {
      profile = resolve(ref);
    } catch (const std::exception& e) {
      throw ParseError(row.number, "mass_profile_ref", "cannot load profile '" + ref + "': " + e.what());
    }
    out.emplace_back(id, weight, std::move(*profile));
  }
  return out;
}

}  // namespace calorie::io
