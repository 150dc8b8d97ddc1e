// Acceptance runner: one PASS/FAIL line per criterion A1..A8, followed by the
// underlying statistics. Exit code 0 iff every requested criterion passes.
//
//   acceptance [A1 ... A8 | all] [--workers N] [--seed S]

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slowtrap/harness.hpp"
#include "slowtrap/cadlag.hpp"

namespace {

// wall-clock limits in seconds
const std::map<std::string, double> kRuntimeLimit = {{"A1", 60},  {"A2", 600}, {"A3", 600}, {"A4", 300},
                                                     {"A5", 900}, {"A6", 60},  {"A7", 60},  {"A8", 300}};

}  // namespace

int main(int argc, char** argv) {
  using namespace slowtrap;
  CLI::App app{"Acceptance criteria A1..A8"};
  std::vector<std::string> ids;
  RunOptions opt;
  app.add_option("ids", ids, "criteria to run (default: all)");
  app.add_option("--workers", opt.workers, "worker threads (0 = all cores)");
  app.add_option("--seed", opt.seed, "master seed");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) ids = acceptance_ids();

  bool all = true;
  try {
    const Config cfg = effective_config(Config{});
    for (const auto& id : ids) {
      const auto start = std::chrono::steady_clock::now();
      const auto r = run_acceptance(id, cfg, opt);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const double limit = kRuntimeLimit.at(id);
      const bool pass = r.passes(id) && secs < limit;
      all = all && pass;
      std::cout << id << ' ' << (pass ? "PASS" : "FAIL") << " (" << r.id << ", " << format_double(std::round(secs * 10) / 10)
                << " s of " << format_double(limit) << " s)\n";
      for (const auto& c : r.criteria) {
        if (c.acceptance != id) continue;
        std::cout << "    " << (c.pass ? "ok   " : "MISS ") << c.name << " = " << format_double(c.value) << "  [" << c.bound
                  << "]\n";
      }
      if (secs >= limit) std::cout << "    MISS runtime " << format_double(secs) << " s\n";
      for (const auto& w : r.warnings) std::cout << "    warning: " << w << '\n';
      std::cout.flush();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return all ? 0 : 1;
}
