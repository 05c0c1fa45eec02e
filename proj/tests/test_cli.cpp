// End-to-end tests of the vsim driver binary: exit-code contract, report
// files, determinism, golden-file workflow and the sweep grid.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kBin = VSIM_BIN_PATH;
const std::string kRoot = VSIM_REPO_ROOT;

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the driver in `dir` with the given arguments and environment prefix.
CmdResult run_vsim(const fs::path& dir, const std::string& args,
                   const std::string& env = "") {
  fs::path out = dir / "stdout.txt";
  fs::path err = dir / "stderr.txt";
  std::string cmd = "cd " + dir.string() + " && " + env + " " + kBin + " " +
                    args + " > stdout.txt 2> stderr.txt";
  int rc = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("vsim_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("run: happy path writes a report echoing the resolved config") {
  auto dir = fresh_dir("run");
  auto r = run_vsim(dir,
                    "run " + kRoot + "/kernels/pathfinder_tiny.vasm -c " +
                        kRoot + "/cfg/table10_mvl8_l1.cfg --check");
  CAPTURE(r.err);
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("check ok") != std::string::npos);
  REQUIRE(fs::exists(dir / "report.json"));
  auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["program"] == "pathfinder_tiny");
  CHECK(j["config"]["engine"]["lanes"] == 1);
  CHECK(j["config"]["engine"]["mvl_elements"] == 8);
  CHECK(j["counters"]["vector_operations"].get<uint64_t>() > 0);
  CHECK(j.contains("cycles"));
}

TEST_CASE("run: config exit codes and messages") {
  auto dir = fresh_dir("cfgerr");
  auto r = run_vsim(dir, "run kernel:blackscholes:tiny --set lanes=3");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("lanes must be in {1,2,4,8}") != std::string::npos);

  r = run_vsim(dir, "run kernel:blackscholes:tiny --set engine.nope=1");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("unknown config key") != std::string::npos);

  r = run_vsim(dir, "run kernel:blackscholes:tiny -c nosuch.cfg");
  CHECK(r.exit_code == 3);
}

TEST_CASE("run: assembly failures exit 2") {
  auto dir = fresh_dir("asmerr");
  std::ofstream(dir / "bad.vasm") << ".text\nmain: vfrob.v v1, v2\nret\n";
  auto r = run_vsim(dir, "run bad.vasm");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("assembly error") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);

  r = run_vsim(dir, "run does_not_exist.vasm");
  CHECK(r.exit_code == 2);

  r = run_vsim(dir, "run kernel:nosuch:tiny");
  CHECK(r.exit_code == 2);
}

TEST_CASE("run: VSIM_STEP_LIMIT env honors the step-limit exit code") {
  auto dir = fresh_dir("steplim");
  auto r = run_vsim(dir, "run kernel:blackscholes:tiny",
                    "VSIM_STEP_LIMIT=100");
  CHECK(r.exit_code == 5);
  CHECK(r.err.find("step limit") != std::string::npos);
}

TEST_CASE("run: --functional omits timing but keeps counters") {
  auto dir = fresh_dir("func");
  auto r = run_vsim(dir, "run kernel:pathfinder:tiny --functional");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(!j.contains("cycles"));
  CHECK(j["counters"]["vector_operations"].get<uint64_t>() > 0);
}

TEST_CASE("run: two runs of one grid point produce identical events.csv") {
  auto dir = fresh_dir("events1");
  auto cfg = kRoot + "/cfg/table10_mvl16_l2.cfg";
  auto r = run_vsim(dir, "run kernel:pathfinder:tiny -c " + cfg + " --events");
  CHECK(r.exit_code == 0);
  std::string first = slurp(dir / "events.csv");
  REQUIRE(!first.empty());
  auto dir2 = fresh_dir("events2");
  r = run_vsim(dir2, "run kernel:pathfinder:tiny -c " + cfg + " --events");
  CHECK(r.exit_code == 0);
  CHECK(first == slurp(dir2 / "events.csv"));
  CHECK(lines_of(first).front() == "tick,unit,event,seq,detail");
}

TEST_CASE("check: golden files are created once, then verified") {
  auto dir = fresh_dir("golden");
  auto r = run_vsim(dir, "check kernel:streamcluster_dist:tiny gold.json");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("golden written") != std::string::npos);
  REQUIRE(fs::exists(dir / "gold.json"));

  r = run_vsim(dir, "check kernel:streamcluster_dist:tiny gold.json");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("check ok") != std::string::npos);

  // tamper with one word: the mismatch must be caught and exit 4
  auto j = nlohmann::json::parse(slurp(dir / "gold.json"));
  j["segments"]["sc_dist"][0] = "0xdeadbeefdeadbeef";
  std::ofstream(dir / "gold.json") << j.dump(2);
  r = run_vsim(dir, "check kernel:streamcluster_dist:tiny gold.json");
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("golden mismatch") != std::string::npos);
}

TEST_CASE("asm: canonical form assembles back to the same program") {
  auto dir = fresh_dir("asm");
  auto r = run_vsim(dir, "asm kernel:canneal_swapcost:tiny -o canon.vasm");
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "canon.vasm"));
  // the canonical text must itself run and check clean
  r = run_vsim(dir, "check canon.vasm");
  CHECK(r.exit_code == 0);
}

TEST_CASE("sweep: default grid is 24 deterministic rows with speedups") {
  auto dir = fresh_dir("sweep");
  auto r = run_vsim(dir, "sweep " + kRoot +
                             "/kernels/blackscholes_tiny.vasm --csv grid.csv");
  CAPTURE(r.err);
  CHECK(r.exit_code == 0);
  auto rows = lines_of(slurp(dir / "grid.csv"));
  REQUIRE(rows.size() == 25);  // header + 24 grid points
  auto header = split_csv(rows[0]);
  CHECK(header.front() == "program");
  CHECK(header.back() == "speedup");

  // deterministic order: mvl-major, lanes inner
  CHECK(split_csv(rows[1])[1] == "mvl8_l1");
  CHECK(split_csv(rows[2])[1] == "mvl8_l2");
  CHECK(split_csv(rows[5])[1] == "mvl16_l1");
  CHECK(split_csv(rows[24])[1] == "mvl256_l8");

  // the scalar twin was auto-detected, so speedup is populated and the
  // MVL=256 rows scale (weakly) monotonically in lanes
  std::vector<double> sp256;
  for (size_t i = 21; i <= 24; ++i) {
    auto f = split_csv(rows[i]);
    REQUIRE(!f.back().empty());
    sp256.push_back(std::stod(f.back()));
  }
  for (size_t i = 1; i < sp256.size(); ++i) CHECK(sp256[i] >= sp256[i - 1]);

  // a second sweep reproduces the bytes exactly
  auto r2 = run_vsim(dir, "sweep " + kRoot +
                              "/kernels/blackscholes_tiny.vasm --csv g2.csv");
  CHECK(r2.exit_code == 0);
  CHECK(slurp(dir / "grid.csv") == slurp(dir / "g2.csv"));
}

TEST_CASE("sweep: restricted grids and failure identification") {
  auto dir = fresh_dir("sweep1");
  auto r = run_vsim(dir,
                    "sweep kernel:pathfinder:tiny --lanes 1 --mvl 8");
  CHECK(r.exit_code == 0);
  auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(split_csv(rows[1])[1] == "mvl8_l1");

  // a failing point aborts the sweep and names the config
  r = run_vsim(dir,
               "sweep kernel:pathfinder:tiny --lanes 1,2 --mvl 8 "
               "--baseline none",
               "VSIM_STEP_LIMIT=50");
  CHECK(r.exit_code == 5);
  CHECK(r.err.find("sweep aborted") != std::string::npos);
  CHECK(r.err.find("mvl8_l") != std::string::npos);
}

TEST_CASE("config round-trip: the report echo reproduces identical output") {
  auto dir = fresh_dir("roundtrip");
  auto r = run_vsim(dir, "run kernel:pathfinder:tiny -c " + kRoot +
                             "/cfg/table10_mvl32_l4.cfg --events");
  CHECK(r.exit_code == 0);
  std::string report1 = slurp(dir / "report.json");
  std::string events1 = slurp(dir / "events.csv");

  auto dir2 = fresh_dir("roundtrip2");
  fs::copy_file(dir / "report.json", dir2 / "echo.json");
  r = run_vsim(dir2, "run kernel:pathfinder:tiny -c echo.json --events");
  CHECK(r.exit_code == 0);
  CHECK(slurp(dir2 / "report.json") == report1);
  CHECK(slurp(dir2 / "events.csv") == events1);
}

TEST_CASE("run: --csv appends sweep-style rows") {
  auto dir = fresh_dir("csvrow");
  auto r = run_vsim(dir, "run kernel:pathfinder:tiny --csv rows.csv");
  CHECK(r.exit_code == 0);
  r = run_vsim(dir,
               "run kernel:pathfinder:tiny --set engine.lanes=4 "
               "--csv rows.csv");
  CHECK(r.exit_code == 0);
  auto rows = lines_of(slurp(dir / "rows.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(split_csv(rows[1])[1] == "mvl8_l1");
  CHECK(split_csv(rows[2])[1] == "mvl8_l4");
}
