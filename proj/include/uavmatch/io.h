#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uavmatch/accumulator.h"
#include "uavmatch/bench.h"
#include "uavmatch/geometry.h"
#include "uavmatch/motion.h"
#include "uavmatch/pipeline.h"
#include "uavmatch/ransac.h"
#include "uavmatch/synth.h"

// Plain-text formats: one record per line, whitespace-delimited fields,
// '#' starts a comment, blank lines are ignored.
//
//   matches  x1 y1 x2 y2
//   poses    image_id X Y Z omega phi kappa       (degrees)
//   camera   f cx cy k1 k2 k3 p1 p2 width height  (single record)
//   mount    pitch roll yaw tx ty tz              (single record, degrees, m)
//   labels   0|1
//   mask     0|1
namespace uavmatch::io {

// Error with a "<kind> file line N: ..." message.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& kind, std::size_t line, const std::string& what);
  ParseError(const std::string& kind, const std::string& what);
};

struct PoseEntry {
  std::string image_id;
  NavigationRecord navigation;
};

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

std::vector<Correspondence> ReadMatches(const std::filesystem::path& path);
void WriteMatches(const std::filesystem::path& path,
                  std::span<const Correspondence> matches);

std::vector<PoseEntry> ReadPoses(const std::filesystem::path& path);
void WritePoses(const std::filesystem::path& path,
                std::span<const PoseEntry> poses);

CameraIntrinsics ReadCamera(const std::filesystem::path& path);
void WriteCamera(const std::filesystem::path& path,
                 const CameraIntrinsics& camera);

MountAngles ReadMount(const std::filesystem::path& path);
void WriteMount(const std::filesystem::path& path, const MountAngles& mount);

std::vector<bool> ReadFlags(const std::filesystem::path& path,
                            const std::string& kind);
void WriteFlags(const std::filesystem::path& path,
                const std::vector<bool>& flags);

Mat3 ReadMatrix(const std::filesystem::path& path);
void WriteMatrix(const std::filesystem::path& path, const Mat3& m);

// "bin lo hi count" per line.
void WriteHistogram(const std::filesystem::path& path,
                    const AccumulatorArray& accumulator);

// Directory layout written by the synth subcommand.
void WriteLabeledMatchSet(const std::filesystem::path& dir,
                          const LabeledMatchSet& set);
LabeledMatchSet ReadLabeledMatchSet(const std::filesystem::path& dir);

nlohmann::ordered_json ReportToJson(const VerificationReport& report,
                                    bool include_timings);
nlohmann::ordered_json FilterToJson(const FilterOutcome& outcome,
                                    bool include_timings);
nlohmann::ordered_json BenchToJson(const BenchReport& report, bool counts_only);

}  // namespace uavmatch::io
