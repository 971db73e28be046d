#include "uavmatch/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace uavmatch::io {
namespace {

using Fields = std::vector<std::string>;

struct Record {
  std::size_t line;
  Fields fields;
};

std::vector<Record> ReadRecords(const std::filesystem::path& path,
                                const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw ParseError(kind, "cannot open " + path.string());
  std::vector<Record> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    Fields fields;
    for (std::string tok; tokens >> tok;) fields.push_back(tok);
    if (!fields.empty()) records.push_back({number, std::move(fields)});
  }
  return records;
}

void ExpectFields(const Record& r, std::size_t n, const std::string& kind) {
  if (r.fields.size() != n) {
    throw ParseError(kind, r.line,
                     "expected " + std::to_string(n) + " fields, got " +
                         std::to_string(r.fields.size()));
  }
}

double ParseDouble(const std::string& text, std::size_t line,
                   const std::string& kind) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(kind, line, "not a finite number: '" + text + "'");
  }
  return value;
}

int ParseInt(const std::string& text, std::size_t line,
             const std::string& kind) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(kind, line, "not an integer: '" + text + "'");
  }
  return value;
}

const Record& SingleRecord(const std::vector<Record>& records,
                           const std::string& kind) {
  if (records.size() != 1) {
    throw ParseError(kind, "expected exactly one record, got " +
                               std::to_string(records.size()));
  }
  return records.front();
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

nlohmann::ordered_json StageJson(const StageOutcome& s) {
  nlohmann::ordered_json j;
  j["kept"] = s.kept.size();
  j["rejected"] = s.rejected.size();
  j["passthrough"] = s.passthrough.size();
  j["skipped"] = s.skipped;
  j["peak_bin"] = s.peak_bin ? nlohmann::ordered_json(*s.peak_bin) : nullptr;
  j["selected_bins"] = s.selected_bins;
  if (s.accumulator) j["histogram"] = s.accumulator->counts();
  return j;
}

nlohmann::ordered_json AggregateJson(const Aggregate& a) {
  return {{"max", a.max}, {"mean", a.mean}, {"stddev", a.stddev}, {"sum", a.sum}};
}

}  // namespace

ParseError::ParseError(const std::string& kind, std::size_t line,
                       const std::string& what)
    : std::runtime_error(kind + " file line " + std::to_string(line) + ": " +
                         what) {}

ParseError::ParseError(const std::string& kind, const std::string& what)
    : std::runtime_error(kind + " file: " + what) {}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<Correspondence> ReadMatches(const std::filesystem::path& path) {
  const std::string kind = "matches";
  std::vector<Correspondence> matches;
  for (const Record& r : ReadRecords(path, kind)) {
    ExpectFields(r, 4, kind);
    Correspondence c;
    c.p1 = Vec2(ParseDouble(r.fields[0], r.line, kind),
                ParseDouble(r.fields[1], r.line, kind));
    c.p2 = Vec2(ParseDouble(r.fields[2], r.line, kind),
                ParseDouble(r.fields[3], r.line, kind));
    c.id = matches.size();
    matches.push_back(c);
  }
  return matches;
}

void WriteMatches(const std::filesystem::path& path,
                  std::span<const Correspondence> matches) {
  auto out = OpenOut(path);
  out << "# x1 y1 x2 y2\n";
  for (const Correspondence& c : matches) {
    out << FormatDouble(c.p1.x()) << ' ' << FormatDouble(c.p1.y()) << ' '
        << FormatDouble(c.p2.x()) << ' ' << FormatDouble(c.p2.y()) << '\n';
  }
}

std::vector<PoseEntry> ReadPoses(const std::filesystem::path& path) {
  const std::string kind = "pose";
  std::vector<PoseEntry> poses;
  for (const Record& r : ReadRecords(path, kind)) {
    ExpectFields(r, 7, kind);
    PoseEntry e;
    e.image_id = r.fields[0];
    for (int i = 0; i < 3; ++i) {
      e.navigation.position[i] = ParseDouble(r.fields[1 + i], r.line, kind);
    }
    e.navigation.omega = ParseDouble(r.fields[4], r.line, kind);
    e.navigation.phi = ParseDouble(r.fields[5], r.line, kind);
    e.navigation.kappa = ParseDouble(r.fields[6], r.line, kind);
    poses.push_back(std::move(e));
  }
  return poses;
}

void WritePoses(const std::filesystem::path& path,
                std::span<const PoseEntry> poses) {
  auto out = OpenOut(path);
  out << "# image_id X Y Z omega phi kappa\n";
  for (const PoseEntry& e : poses) {
    const auto& n = e.navigation;
    out << e.image_id << ' ' << FormatDouble(n.position.x()) << ' '
        << FormatDouble(n.position.y()) << ' ' << FormatDouble(n.position.z())
        << ' ' << FormatDouble(n.omega) << ' ' << FormatDouble(n.phi) << ' '
        << FormatDouble(n.kappa) << '\n';
  }
}

CameraIntrinsics ReadCamera(const std::filesystem::path& path) {
  const std::string kind = "camera";
  const auto records = ReadRecords(path, kind);
  const Record& r = SingleRecord(records, kind);
  ExpectFields(r, 10, kind);
  CameraIntrinsics c;
  c.focal_length = ParseDouble(r.fields[0], r.line, kind);
  c.principal_point = Vec2(ParseDouble(r.fields[1], r.line, kind),
                           ParseDouble(r.fields[2], r.line, kind));
  for (int i = 0; i < 3; ++i) {
    c.radial[i] = ParseDouble(r.fields[3 + i], r.line, kind);
  }
  for (int i = 0; i < 2; ++i) {
    c.tangential[i] = ParseDouble(r.fields[6 + i], r.line, kind);
  }
  c.width = ParseInt(r.fields[8], r.line, kind);
  c.height = ParseInt(r.fields[9], r.line, kind);
  try {
    c.Validate();
  } catch (const InvalidIntrinsics& e) {
    throw ParseError(kind, r.line, e.what());
  }
  return c;
}

void WriteCamera(const std::filesystem::path& path,
                 const CameraIntrinsics& c) {
  auto out = OpenOut(path);
  out << "# f cx cy k1 k2 k3 p1 p2 width height\n";
  out << FormatDouble(c.focal_length) << ' '
      << FormatDouble(c.principal_point.x()) << ' '
      << FormatDouble(c.principal_point.y());
  for (double k : c.radial) out << ' ' << FormatDouble(k);
  for (double p : c.tangential) out << ' ' << FormatDouble(p);
  out << ' ' << c.width << ' ' << c.height << '\n';
}

MountAngles ReadMount(const std::filesystem::path& path) {
  const std::string kind = "mount";
  const auto records = ReadRecords(path, kind);
  const Record& r = SingleRecord(records, kind);
  ExpectFields(r, 6, kind);
  MountAngles m;
  m.pitch = ParseDouble(r.fields[0], r.line, kind);
  m.roll = ParseDouble(r.fields[1], r.line, kind);
  m.yaw = ParseDouble(r.fields[2], r.line, kind);
  for (int i = 0; i < 3; ++i) {
    m.lever_arm[i] = ParseDouble(r.fields[3 + i], r.line, kind);
  }
  return m;
}

void WriteMount(const std::filesystem::path& path, const MountAngles& m) {
  auto out = OpenOut(path);
  out << "# pitch roll yaw tx ty tz\n";
  out << FormatDouble(m.pitch) << ' ' << FormatDouble(m.roll) << ' '
      << FormatDouble(m.yaw) << ' ' << FormatDouble(m.lever_arm.x()) << ' '
      << FormatDouble(m.lever_arm.y()) << ' ' << FormatDouble(m.lever_arm.z())
      << '\n';
}

std::vector<bool> ReadFlags(const std::filesystem::path& path,
                            const std::string& kind) {
  std::vector<bool> flags;
  for (const Record& r : ReadRecords(path, kind)) {
    ExpectFields(r, 1, kind);
    if (r.fields[0] == "0") {
      flags.push_back(false);
    } else if (r.fields[0] == "1") {
      flags.push_back(true);
    } else {
      throw ParseError(kind, r.line, "expected 0 or 1, got '" + r.fields[0] + "'");
    }
  }
  return flags;
}

void WriteFlags(const std::filesystem::path& path,
                const std::vector<bool>& flags) {
  auto out = OpenOut(path);
  for (bool f : flags) out << (f ? "1\n" : "0\n");
}

Mat3 ReadMatrix(const std::filesystem::path& path) {
  const std::string kind = "matrix";
  const auto records = ReadRecords(path, kind);
  if (records.size() != 3) {
    throw ParseError(kind, "expected 3 rows, got " +
                               std::to_string(records.size()));
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    ExpectFields(records[r], 3, kind);
    for (int c = 0; c < 3; ++c) {
      m(r, c) = ParseDouble(records[r].fields[c], records[r].line, kind);
    }
  }
  return m;
}

void WriteMatrix(const std::filesystem::path& path, const Mat3& m) {
  auto out = OpenOut(path);
  for (int r = 0; r < 3; ++r) {
    out << FormatDouble(m(r, 0)) << ' ' << FormatDouble(m(r, 1)) << ' '
        << FormatDouble(m(r, 2)) << '\n';
  }
}

void WriteHistogram(const std::filesystem::path& path,
                    const AccumulatorArray& acc) {
  auto out = OpenOut(path);
  out << "# bin lo hi count" << (acc.cyclic() ? " (cyclic)" : "") << '\n';
  for (std::size_t b = 0; b < acc.num_bins(); ++b) {
    const double lo = acc.lo() + static_cast<double>(b) * acc.bin_width();
    out << b << ' ' << FormatDouble(lo) << ' '
        << FormatDouble(lo + acc.bin_width()) << ' ' << acc.counts()[b] << '\n';
  }
}

void WriteLabeledMatchSet(const std::filesystem::path& dir,
                          const LabeledMatchSet& set) {
  std::filesystem::create_directories(dir);
  WriteMatches(dir / "matches.txt", set.correspondences);
  WriteMatches(dir / "matches_noise_free.txt", set.noise_free);
  WriteFlags(dir / "labels.txt", set.labels);
  WriteCamera(dir / "camera.txt", set.intrinsics);
  WriteMount(dir / "mount.txt", set.mount);
  const std::vector<PoseEntry> noisy{{"1", set.noisy_navigation[0]},
                                     {"2", set.noisy_navigation[1]}};
  const std::vector<PoseEntry> truth{{"1", set.true_navigation[0]},
                                     {"2", set.true_navigation[1]}};
  WritePoses(dir / "poses.txt", noisy);
  WritePoses(dir / "poses_true.txt", truth);
  WriteMatrix(dir / "fundamental_true.txt", set.ground_truth_f.matrix());
}

LabeledMatchSet ReadLabeledMatchSet(const std::filesystem::path& dir) {
  LabeledMatchSet set;
  set.correspondences = ReadMatches(dir / "matches.txt");
  set.noise_free = ReadMatches(dir / "matches_noise_free.txt");
  set.labels = ReadFlags(dir / "labels.txt", "labels");
  if (set.labels.size() != set.correspondences.size() ||
      set.noise_free.size() != set.correspondences.size()) {
    throw ParseError("labels", "record count differs from matches");
  }
  set.intrinsics = ReadCamera(dir / "camera.txt");
  set.mount = ReadMount(dir / "mount.txt");
  const auto noisy = ReadPoses(dir / "poses.txt");
  const auto truth = ReadPoses(dir / "poses_true.txt");
  if (noisy.size() != 2 || truth.size() != 2) {
    throw ParseError("pose", "expected two records per pose file");
  }
  const MountCalibration mount = set.mount.ToCalibration();
  for (int i = 0; i < 2; ++i) {
    set.noisy_navigation[i] = noisy[i].navigation;
    set.true_navigation[i] = truth[i].navigation;
    set.noisy_poses[i] =
        ComposeCameraPose(set.noisy_navigation[i].ToPlatformPose(), mount);
    set.true_poses[i] =
        ComposeCameraPose(set.true_navigation[i].ToPlatformPose(), mount);
  }
  set.ground_truth_f = FundamentalMatrix(ReadMatrix(dir / "fundamental_true.txt"));
  return set;
}

nlohmann::ordered_json ReportToJson(const VerificationReport& report,
                                    bool include_timings) {
  nlohmann::ordered_json j;
  j["status"] = report.verified() ? "verified" : "failed_to_verify";
  const StageStats& s = report.stats;
  j["counts"] = {{"input", s.input},
                 {"dropped", s.dropped},
                 {"out_of_frame", s.out_of_frame},
                 {"after_direction", s.after_direction},
                 {"after_direction_change", s.after_direction_change},
                 {"after_length", s.after_length},
                 {"ransac_input", s.ransac_input},
                 {"inliers", s.inliers}};
  j["iterations"] = report.iterations_used;
  if (report.fundamental) {
    const Mat3& f = report.fundamental->matrix();
    j["fundamental"] = {{f(0, 0), f(0, 1), f(0, 2)},
                        {f(1, 0), f(1, 1), f(1, 2)},
                        {f(2, 0), f(2, 1), f(2, 2)}};
  } else {
    j["fundamental"] = nullptr;
  }
  if (report.filter) {
    j["stages"] = {{"direction", StageJson(report.filter->direction)},
                   {"direction_change", StageJson(report.filter->direction_change)},
                   {"length", StageJson(report.filter->length)}};
  }
  if (include_timings) {
    j["timings"] = {{"filter_seconds", s.filter_seconds},
                    {"verify_seconds", s.verify_seconds},
                    {"sum_seconds", s.filter_seconds + s.verify_seconds}};
  }
  return j;
}

nlohmann::ordered_json FilterToJson(const FilterOutcome& outcome,
                                    bool include_timings) {
  const StageStats& s = outcome.stats;
  nlohmann::ordered_json j;
  j["counts"] = {{"input", s.input},
                 {"dropped", s.dropped},
                 {"out_of_frame", s.out_of_frame},
                 {"after_direction", s.after_direction},
                 {"after_direction_change", s.after_direction_change},
                 {"after_length", s.after_length}};
  j["stages"] = {{"direction", StageJson(outcome.hmcc.direction)},
                 {"direction_change", StageJson(outcome.hmcc.direction_change)},
                 {"length", StageJson(outcome.hmcc.length)}};
  if (include_timings) j["timings"] = {{"filter_seconds", s.filter_seconds}};
  return j;
}

nlohmann::ordered_json BenchToJson(const BenchReport& report, bool counts_only) {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const BenchRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["pair"] = row.pair + 1;
    r["matches"] = row.n_matches;
    for (const MethodRow& m : row.methods) {
      nlohmann::ordered_json mj;
      if (!counts_only) {
        mj["filter_seconds"] = m.filter_seconds;
        mj["verify_seconds"] = m.verify_seconds;
        mj["sum_seconds"] = m.sum_seconds;
      }
      mj["filter_survivors"] = m.filter_survivors;
      mj["inliers"] = m.n_inliers;
      mj["precision"] = m.accuracy.precision;
      mj["recall"] = m.accuracy.recall;
      mj["failed"] = m.failed;
      r[std::string(MethodName(m.method))] = mj;
    }
    j["rows"].push_back(r);
  }
  nlohmann::ordered_json agg;
  for (const MethodAggregate& a : report.aggregates) {
    nlohmann::ordered_json aj;
    if (!counts_only) {
      aj["filter"] = AggregateJson(a.filter);
      aj["verify"] = AggregateJson(a.verify);
      aj["sum"] = AggregateJson(a.total);
    }
    aj["inliers"] = AggregateJson(a.inliers);
    agg[std::string(MethodName(a.method))] = aj;
  }
  j["aggregates"] = agg;
  return j;
}

}  // namespace uavmatch::io
