// Command-line front end: simulate, experiment, metric, pilot.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slowtrap/cadlag.hpp"
#include "slowtrap/config.hpp"
#include "slowtrap/harness.hpp"
#include "slowtrap/simulate.hpp"

namespace {

using namespace slowtrap;

Config load_user_config(const std::string& path) {
  Config cfg = path.empty() ? Config{} : Config::load(path);
  validate_config(cfg);
  return cfg;
}

void print_summary(const ExperimentResult& r, std::ostream& out) {
  for (const auto& b : r.budget) out << "  budget " << b.name << " = " << format_double(b.value) << '\n';
  for (const auto& w : r.warnings) out << "  warning: " << w << '\n';
  for (const auto& c : r.criteria)
    out << (c.pass ? "PASS " : "FAIL ") << r.id << '.' << c.name << (c.acceptance.empty() ? "" : " [" + c.acceptance + "]")
        << " value=" << format_double(c.value) << " bound: " << c.bound << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trap-model simulator, limit-process samplers and Monte Carlo checks"};
  app.require_subcommand(1);

  std::string config_path, out, id, kind, process;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned workers = 0;
  double T = 0.0, t = 1.0;
  std::size_t n = 100;
  std::vector<std::string> files;

  auto* sim = app.add_subcommand("simulate", "Write one path as CSV (t,value)");
  sim->add_option("--process", process, "btm | clock | mB | extremal_fin | fin")->required();
  sim->add_option("--n", n, "scale parameter");
  sim->add_option("--t", t, "macroscopic time");
  sim->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_given = true; });
  sim->add_option("--out", out, "output CSV (stdout if empty)");
  sim->add_option("--config", config_path, "config file");

  auto* exp = app.add_subcommand("experiment", "Run one experiment and write <out>/<id>.csv");
  exp->add_option("--id", id, "E1 E2 E3 E4 E6 E7 E8 E9 FA INV")->required();
  exp->add_option("--config", config_path, "config file");
  exp->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_given = true; });
  exp->add_option("--out", out, "output directory")->default_str("results");
  exp->add_option("--workers", workers, "worker threads (0 = all cores)");

  auto* met = app.add_subcommand("metric", "Distance between two path CSVs");
  met->add_option("--kind", kind, "J1 | M1 | L1")->required()->check(CLI::IsMember({"J1", "M1", "L1"}));
  met->add_option("files", files, "two CSV files")->required()->expected(2);
  met->add_option("--T", T, "horizon")->required();

  auto* pil = app.add_subcommand("pilot", "Regenerate the pinned thresholds file");
  pil->add_option("--config", config_path, "config file");
  pil->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_given = true; });
  pil->add_option("--out", out, "output file (default: built-in pinned file)");
  pil->add_option("--workers", workers, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    const Config user = load_user_config(config_path);
    RunOptions opt;
    opt.workers = workers;
    if (user.has("general", "workers") && workers == 0) opt.workers = static_cast<unsigned>(user.get_int("general", "workers", 0));
    opt.seed = seed_given ? seed : static_cast<std::uint64_t>(user.get_int("general", "seed", static_cast<std::int64_t>(opt.seed)));

    if (*sim) {
      const auto path = simulate_process(process, n, t, opt.seed, user);
      if (out.empty()) {
        write_csv(std::cout, path);
      } else {
        write_csv_file(out, path);
      }
      return 0;
    }
    if (*met) {
      const auto f = read_csv_file(files[0]);
      const auto g = read_csv_file(files[1]);
      double d = 0.0;
      if (kind == "J1") d = d_J1(f, g, T);
      if (kind == "M1") d = d_M1(f, g, T).distance;
      if (kind == "L1") d = d_L1(f, g, T);
      std::cout << format_double(d) << '\n';
      return 0;
    }
    if (*exp) {
      const Config cfg = effective_config(user);
      const auto start = std::chrono::steady_clock::now();
      ExperimentResult r;
      try {
        r = run_experiment(id, cfg, opt);
      } catch (...) {
        // flush whatever is known before reporting
        std::cout.flush();
        throw;
      }
      const auto path = write_result(r, out);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cout << "wrote " << path.string() << " (" << format_double(std::round(secs * 10.0) / 10.0) << " s)\n";
      print_summary(r, std::cout);
      return r.all_pass() ? 0 : 1;
    }
    if (*pil) {
      const Config cfg = effective_config(user);
      const std::filesystem::path target = out.empty() ? default_pinned_path() : std::filesystem::path(out);
      std::cout << run_pilot(cfg, opt, target);
      std::cout << "wrote " << target.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
