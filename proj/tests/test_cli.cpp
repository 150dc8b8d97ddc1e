#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "slowtrap/cadlag.hpp"
#include "slowtrap/lattice.hpp"
#include "slowtrap/rng.hpp"

using namespace slowtrap;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SLOWTRAP_CLI;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "slowtrap_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const auto log = scratch("stdout.txt");
  const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("metric L1 of shifted indicators") {
  const auto f = scratch("f.csv"), g = scratch("g.csv");
  write_csv_file(f.string(), StepPath::indicator_from(1.0, 3.0));
  write_csv_file(g.string(), StepPath::indicator_from(1.25, 3.0));
  const auto r = run("metric --kind L1 " + f.string() + " " + g.string() + " --T 3");
  CHECK(r.code == 0);
  CHECK(r.out == "0.25\n");
  const auto j = run("metric --kind J1 " + f.string() + " " + g.string() + " --T 3");
  CHECK(j.code == 0);
  CHECK(std::stod(j.out) == doctest::Approx(0.25));
}

TEST_CASE("simulate clock ends at A_{n^2}") {
  const auto out = scratch("clock.csv");
  const auto r = run("simulate --process clock --n 100 --t 1 --seed 11 --out " + out.string());
  REQUIRE(r.code == 0);
  const auto path = read_csv_file(out.string());
  CHECK(path.horizon == 10000.0);

  // recompute with the library: stream 0 seeds the landscape, then the walk
  Rng rng = make_stream(11, 0);
  const TrapLandscape land(TailFamily::regular(0.5), rng());
  DepthField depths(land);
  const auto walk = simulate_srw(10000, rng);
  const auto clock = clock_process(depths, walk, rng);
  CHECK(path.final_value() == clock.linear[10000]);
}

TEST_CASE("experiment output is reproducible") {
  const auto a = scratch("runA"), b = scratch("runB");
  fs::remove_all(a);
  fs::remove_all(b);
  const auto ra = run("experiment --id E7 --seed 7 --out " + a.string());
  const auto rb = run("experiment --id E7 --seed 7 --out " + b.string());
  CHECK(ra.code == rb.code);
  const auto ta = slurp(a / "E7.csv");
  CHECK(!ta.empty());
  CHECK(ta == slurp(b / "E7.csv"));
  CHECK(ra.out.find("PASS E7.") != std::string::npos);
}

TEST_CASE("bad input is rejected") {
  CHECK(run("frobnicate").code != 0);
  CHECK(run("experiment --id E42").code != 0);
  const auto cfg = scratch("bad.cfg");
  std::ofstream(cfg) << "[E6]\nno_such_key = 1\n";
  const auto r = run("experiment --id E6 --config " + cfg.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("no_such_key") != std::string::npos);
  CHECK(run("simulate --process nope --n 10").code != 0);
  CHECK(run("metric --kind L2 a b --T 1").code != 0);
}

TEST_CASE("every subcommand has help") {
  for (const std::string sub : {"simulate", "experiment", "metric", "pilot"}) {
    const auto r = run(sub + " --help");
    CHECK(r.code == 0);
    CHECK(r.out.find("--") != std::string::npos);
  }
  CHECK(run("--help").code == 0);
}

TEST_CASE("shipped default config lists only known keys") {
  const auto r = run(std::string("experiment --id FA --config ") + SLOWTRAP_DEFAULT_CFG + " --out " + scratch("fa").string());
  CHECK(r.code == 0);
}
