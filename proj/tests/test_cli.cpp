#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "doctest.h"
#include "lqcd/cli.hpp"
#include "lqcd/field_io.hpp"
#include "support.hpp"

using namespace lqcd;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run lqcd_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string profile_path() { return (test::source_dir() / "profiles" / "u250.profile").string(); }

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(test::slurp(dir / cli::kManifestName)); }

void require_same_outputs(const fs::path& a, const fs::path& b) {
  for (const auto& name : manifest(a).at("outputs")) {
    const std::string n = name.get<std::string>();
    CAPTURE(n);
    REQUIRE(test::slurp(a / n) == test::slurp(b / n));
  }
  REQUIRE(test::slurp(a / cli::kManifestName) == test::slurp(b / cli::kManifestName));
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(lqcd_run({}).code == cli::kExitUsage);
  CHECK(lqcd_run({"frobnicate"}).code == cli::kExitUsage);
  const auto dir = test::scratch_dir("cli_usage").string();
  CHECK(lqcd_run({"gen", "--dims", "4,4,4", "--out", dir}).code == cli::kExitUsage);
  CHECK(lqcd_run({"gen", "--dims", "4,1,4,4", "--out", dir}).code == cli::kExitUsage);
  CHECK(lqcd_run({"gen", "--dims", "4,4,4,4", "--kind", "warm", "--out", dir}).code == cli::kExitUsage);
  CHECK(lqcd_run({"perf", "--profile", profile_path(), "--ii-min", "5", "--ii-max", "4", "--out", dir}).code ==
        cli::kExitUsage);
  CHECK(lqcd_run({"--version"}).code == cli::kExitOk);
}

TEST_CASE("I/O errors exit 3") {
  const auto dir = test::scratch_dir("cli_io").string();
  CHECK(lqcd_run({"perf", "--profile", "/nonexistent/u250.profile", "--out", dir}).code == cli::kExitIo);
  CHECK(lqcd_run({"solve", "--gauge", "/nonexistent/gauge.lqcd", "--out", dir}).code == cli::kExitIo);
  CHECK(lqcd_run({"rerun", "--manifest", "/nonexistent/manifest.json", "--out", dir}).code == cli::kExitIo);
  const auto garbage = test::scratch_dir("cli_io_garbage") / "gauge.lqcd";
  write_file(garbage, std::vector<std::uint8_t>(100, 7));
  CHECK(lqcd_run({"solve", "--gauge", garbage.string(), "--out", dir}).code == cli::kExitIo);
}

TEST_CASE("gen writes a loadable field and a manifest") {
  const auto dir = test::scratch_dir("cli_gen");
  const auto r = lqcd_run({"gen", "--dims", "4,2,2,2", "--seed", "9", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto g = load_gauge<double>(dir / cli::kGaugeName);
  CHECK(g.geometry().dims() == LatticeDims{4, 2, 2, 2});
  const auto ref = hot_start<double>(make_geometry({4, 2, 2, 2}), 9);
  CHECK(std::ranges::equal(g.links(), ref.links()));
  const auto m = manifest(dir);
  CHECK(m.at("tool") == "lqcd");
  CHECK(m.at("version") == cli::kToolVersion);
  CHECK(m.at("subcommand") == "gen");
  CHECK(m.at("parameters").at("seed") == 9);
  CHECK(m.at("outputs") == nlohmann::json::array({cli::kGaugeName}));
}

TEST_CASE("gen matches the committed golden files") {
  const auto golden = test::source_dir() / "tests" / "golden";
  const auto dir = test::scratch_dir("cli_gen_golden");
  REQUIRE(lqcd_run({"gen", "--dims", "2,2,2,2", "--kind", "cold", "--out", (dir / "cold").string()}).code == 0);
  REQUIRE(lqcd_run({"gen", "--dims", "2,2,2,2", "--seed", "42", "--out", (dir / "hot").string()}).code == 0);
  REQUIRE(lqcd_run({"gen", "--dims", "2,2,2,2", "--seed", "42", "--compressed", "--out", (dir / "hotc").string()})
              .code == 0);
  CHECK(test::slurp(dir / "cold" / cli::kGaugeName) == test::slurp(golden / "cold_2x2x2x2.lqcd"));
  CHECK(test::slurp(dir / "hot" / cli::kGaugeName) == test::slurp(golden / "hot_2x2x2x2_seed42.lqcd"));
  CHECK(test::slurp(dir / "hotc" / cli::kGaugeName) == test::slurp(golden / "hot_2x2x2x2_seed42_compressed.lqcd"));
}

TEST_CASE("solve and rerun reproduce outputs bitwise") {
  const auto gen_dir = test::scratch_dir("cli_solve_gen");
  REQUIRE(lqcd_run({"gen", "--dims", "4,4,2,2", "--seed", "5", "--out", gen_dir.string()}).code == 0);
  const auto gauge = (gen_dir / cli::kGaugeName).string();
  for (const std::string alg : {"cg", "rgcg"}) {
    CAPTURE(alg);
    const auto a = test::scratch_dir("cli_solve_a_" + alg);
    const auto b = test::scratch_dir("cli_solve_b_" + alg);
    const auto r = lqcd_run({"solve", "--gauge", gauge, "--source", "manufactured", "--seed", "3", "--algorithm", alg,
                             "--inner-k", "8", "--out", a.string()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(fs::exists(a / cli::kSolutionName));
    CHECK(fs::exists(a / cli::kExactName));
    CHECK(fs::exists(a / cli::kReportName));
    REQUIRE(lqcd_run({"rerun", "--manifest", (a / cli::kManifestName).string(), "--out", b.string()}).code == 0);
    require_same_outputs(a, b);
    const auto m = manifest(a);
    CHECK(m.at("inputs").at("gauge") == gauge);
    CHECK(m.at("parameters").at("algorithm") == alg);
  }
  // thread count does not change the bits
  const auto t1 = test::scratch_dir("cli_solve_t1");
  const auto t2 = test::scratch_dir("cli_solve_t2");
  REQUIRE(lqcd_run({"--threads", "1", "solve", "--gauge", gauge, "--source", "random", "--out", t1.string()}).code ==
          0);
  REQUIRE(lqcd_run({"--threads", "3", "solve", "--gauge", gauge, "--source", "random", "--out", t2.string()}).code ==
          0);
  require_same_outputs(t1, t2);
}

TEST_CASE("solve report columns and non-convergence") {
  const auto gen_dir = test::scratch_dir("cli_solve_nc_gen");
  REQUIRE(lqcd_run({"gen", "--dims", "4,4,2,2", "--seed", "5", "--out", gen_dir.string()}).code == 0);
  const auto gauge = (gen_dir / cli::kGaugeName).string();
  const auto dir = test::scratch_dir("cli_solve_nc");
  const auto r = lqcd_run({"solve", "--gauge", gauge, "--source", "point:3,1,2", "--mass", "0", "--rmin", "1e-12",
                           "--max-outer", "1", "--out", dir.string()});
  CHECK(r.code == cli::kExitNotConverged);
  std::istringstream report(test::slurp_text(dir / cli::kReportName));
  std::string header;
  std::getline(report, header);
  CHECK(header == "l,s_high,relative_residual,inner_iterations,ddagd_high,ddagd_low,restarted");
  CHECK(lqcd_run({"solve", "--gauge", gauge, "--source", "point:999,0,0", "--out", dir.string()}).code ==
        cli::kExitUsage);
  CHECK(lqcd_run({"solve", "--gauge", gauge, "--source", "spiral", "--out", dir.string()}).code == cli::kExitUsage);
}

TEST_CASE("perf outputs, filters and goldens") {
  const auto a = test::scratch_dir("cli_perf_a");
  const auto b = test::scratch_dir("cli_perf_b");
  REQUIRE(lqcd_run({"perf", "--profile", profile_path(), "--out", a.string()}).code == 0);
  REQUIRE(lqcd_run({"rerun", "--manifest", (a / cli::kManifestName).string(), "--out", b.string()}).code == 0);
  require_same_outputs(a, b);
  const auto golden = test::source_dir() / "tests" / "golden" / "perf";
  for (const char* name : {"fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv", "anchors.csv", "scenario.txt"}) {
    CAPTURE(name);
    CHECK(test::slurp(a / name) == test::slurp(golden / name));
  }

  const auto s = test::scratch_dir("cli_perf_single");
  REQUIRE(lqcd_run({"perf", "--profile", profile_path(), "--precision", "single", "--out", s.string()}).code == 0);
  std::istringstream csv(test::slurp_text(s / "fig3.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.find(",single,") != std::string::npos);
  }
  CHECK(rows == 20);

  const auto e = test::scratch_dir("cli_perf_embedded");
  const auto r = lqcd_run({"perf", "--profile", profile_path(), "--scenario", "embedded", "--out", e.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("calibration_factor") != std::string::npos);
}
