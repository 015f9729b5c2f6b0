#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lqcd/algebra.hpp"
#include "lqcd/geometry.hpp"

namespace lqcd::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitNotConverged = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kGaugeName = "gauge.lqcd";
inline constexpr const char* kSolutionName = "solution.lqcd";
inline constexpr const char* kExactName = "x0.lqcd";
inline constexpr const char* kReportName = "report.csv";

struct GenOptions {
  LatticeDims dims{4, 4, 4, 4};
  std::uint64_t seed = 0;
  std::string kind = "hot";  // hot | cold
  Precision precision = Precision::high;
  bool compressed = false;
};

struct SolveOptions {
  std::string gauge;                // absolute once resolved
  std::string source = "point";     // point[:site,spin,color] | random | manufactured
  std::uint64_t seed = 0;
  double mass = 0.1;
  double rmin = 1e-9;
  int inner_k = 16;
  int max_outer = 100;
  int max_iterations = 10000;
  std::string algorithm = "rgcg";   // cg | rgcg
  bool compressed = false;
};

struct PerfOptions {
  std::string profile;               // absolute once resolved
  std::string scenario = "streaming";
  int ii_min = 1;
  int ii_max = 20;
  std::string precision = "both";    // single | double | both
  bool compressed = true;
  LatticeDims dims{12, 8, 8, 8};
};

struct BenchOptions {
  std::string gauge;
  int reps = 10;
  double mass = 0.1;
  bool compressed = false;
};

// Each writes its outputs plus manifest.json into out_dir (created if
// needed) and returns an exit code.
int cmd_gen(const GenOptions& o, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_solve(const SolveOptions& o, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_perf(const PerfOptions& o, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_bench(const BenchOptions& o, std::ostream& log);
// Re-executes the command recorded in a manifest, writing into out_dir.
int cmd_rerun(const std::filesystem::path& manifest, const std::filesystem::path& out_dir, std::ostream& log);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lqcd::cli
