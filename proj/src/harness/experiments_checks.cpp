// FA: golden distances for the three figure families. INV: structural
// invariants (squeeze, localization of the extremal FIN, determinism).

#include <algorithm>
#include <cmath>

#include "experiments.hpp"
#include "slowtrap/lattice.hpp"
#include "slowtrap/parallel.hpp"
#include "slowtrap/stats.hpp"

namespace slowtrap::detail {

ExperimentResult run_figure_a(const Config& cfg, const RunOptions&) {
  const std::string sec = "FA";
  const auto ns = cfg.get_doubles(sec, "n", {2, 4, 8, 16, 32, 64});
  const int steps = static_cast<int>(cfg.get_int(sec, "steps", 16));
  const double T = cfg.get_double(sec, "T", 3.0);
  const auto limit = StepPath::indicator_from(1.0, T);

  ExperimentResult r;
  r.id = "FA";
  r.table.columns = {"example", "n", "d_J1", "d_M1", "d_L1"};
  bool ex1_exact = true, ex2_m1 = true, ex2_j1 = true, ex3_m1 = true, ex3_l1 = true;
  double prev_l1 = std::numeric_limits<double>::infinity();
  double worst_exact = 0.0;
  for (double nd : ns) {
    const int n = static_cast<int>(nd);
    const auto e1 = figure_example1(n, T);
    const auto e2 = figure_example2(n, steps, T);
    const auto e3 = figure_example3(n, steps, T);
    const double j1 = d_J1(e1, limit, T);
    worst_exact = std::max(worst_exact, std::abs(j1 - 1.0 / nd));
    ex1_exact = ex1_exact && std::abs(j1 - 1.0 / nd) <= 1e-12;
    r.table.add({"1", fmt(static_cast<std::size_t>(n)), fmt(j1), fmt(d_M1(e1, limit, T).distance), fmt(d_L1(e1, limit, T))});

    const double m2 = d_M1(e2, limit, T).distance, j2 = d_J1(e2, limit, T);
    ex2_m1 = ex2_m1 && m2 <= 2.0 / nd;
    ex2_j1 = ex2_j1 && j2 >= 0.2;
    r.table.add({"2", fmt(static_cast<std::size_t>(n)), fmt(j2), fmt(m2), fmt(d_L1(e2, limit, T))});

    const double m3 = d_M1(e3, limit, T).distance, l3 = d_L1(e3, limit, T);
    ex3_m1 = ex3_m1 && m3 >= 0.2;
    ex3_l1 = ex3_l1 && l3 < prev_l1;
    prev_l1 = l3;
    r.table.add({"3", fmt(static_cast<std::size_t>(n)), fmt(d_J1(e3, limit, T)), fmt(m3), fmt(l3)});
  }
  r.criteria.push_back(criterion_true("example1_J1_equals_1_over_n", "A7", ex1_exact, "|d_J1 - 1/n| <= 1e-12"));
  r.criteria.push_back(criterion_true("example2_M1_at_most_2_over_n", "A7", ex2_m1, "d_M1 <= 2/n for all n"));
  r.criteria.push_back(criterion_true("example2_J1_at_least_0.2", "A7", ex2_j1, "d_J1 >= 0.2 for all n"));
  r.criteria.push_back(criterion_true("example3_L1_strictly_decreasing", "A7", ex3_l1, "d_L1 strictly decreasing in n"));
  r.criteria.push_back(criterion_true("example3_M1_at_least_0.2", "A7", ex3_m1, "d_M1 >= 0.2 for all n"));
  r.budget.push_back({"example1_max_abs_error", worst_exact});
  r.budget.push_back({"m1_bisection_tolerance", 1e-10});
  return r;
}

ExperimentResult run_invariants(const Config& cfg, const RunOptions& opt) {
  const std::string sec = "INV";
  const std::size_t replicas = replicas_from(cfg, sec, 200);
  const auto n = static_cast<std::size_t>(cfg.get_int(sec, "n", 4000));
  const auto fin_reps = static_cast<std::size_t>(cfg.get_int(sec, "fin_replicas", 2000));
  const double t = cfg.get_double(sec, "t", 1.0);
  const double dt = cfg.get_double(sec, "dt", 2e-3);
  const double v_floor = cfg.get_double(sec, "v_floor", 0.25);

  ExperimentResult r;
  r.id = "INV";
  r.table.columns = {"check", "replicas", "value", "detail"};

  // squeeze nu_min Sigma <= A <= nu_max Sigma at several times, in logs
  const auto family = TailFamily::log_pareto(1.0);
  const auto squeeze = parallel_map(replicas, opt.workers, [&](std::size_t rep) {
    Rng rng = replica_stream(opt, salt_of("INV.squeeze"), rep);
    const TrapLandscape land(family, rng());
    DepthField depths(land);
    const auto walk = simulate_srw(n, rng);
    const auto clock = clock_process(depths, walk, rng);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n; k = k < 10 ? k + 1 : k * 2) {
      const double la = clock.log_times[k];
      const double ls = explored_sum_log(depths, walk, k);
      const double lo = std::log(nu_min(walk, clock.xi, k)) + ls;
      const double hi = std::log(nu_max(walk, clock.xi, k)) + ls;
      // violation measured relative to the log scale
      const double slack = 1e-12 * std::max(1.0, std::abs(la));
      worst = std::max({worst, lo - la - slack, la - hi - slack});
    }
    return worst;
  });
  const double worst = *std::max_element(squeeze.begin(), squeeze.end());
  r.table.add({"squeeze_worst_violation", fmt(replicas), fmt(worst), "log scale, must be <= 0"});
  r.criteria.push_back(criterion_true("squeeze_every_replica", "A8", worst <= 0.0, "nu_min Sigma <= A <= nu_max Sigma"));

  // extremal FIN sits on the flanking sites with gambler's-ruin frequencies
  struct FinRow {
    bool on_sites = false;
    double diff = 0.0;  ///< 1{Z = z1} - p1
  };
  const auto fin = parallel_map(fin_reps, opt.workers, [&](std::size_t rep) {
    Rng rng = replica_stream(opt, salt_of("INV.fin"), rep);
    auto s = sample_continuum(2.0, dt, v_floor, rng);
    fit_window(s, rng, t);
    run_until_level(s, t, rng);
    const auto loc = localization_sites(s.pts, t);
    const double z = extremal_fin_path(s.pts, s.bm, t).at(t);
    return FinRow{z == loc.z1 || z == loc.z2, (z == loc.z1 ? 1.0 : 0.0) - loc.p1};
  });
  std::vector<double> diffs;
  bool confined = true;
  for (const auto& row : fin) {
    confined = confined && row.on_sites;
    diffs.push_back(row.diff);
  }
  const double dev = std::abs(mean(diffs)) / std_error(diffs);
  r.table.add({"fin_confined", fmt(fin_reps), confined ? "1" : "0", "Z_t in {z1, z2}"});
  r.table.add({"fin_frequency_in_se", fmt(fin_reps), fmt(dev), "|mean(1{Z=z1} - p1)| / SE"});
  r.criteria.push_back(criterion_true("extremal_fin_confined", "A8", confined, "all values in {z1, z2}"));
  r.criteria.push_back(criterion_below("gamblers_ruin_frequency_in_se", "A8", dev, 3.0));

  // determinism: byte-identical output for one and several workers, and on rerun
  Config small;
  small.set("E6", "n", "500");
  small.set("E6", "replicas", "200");
  small.set("E7", "n", "1000, 10000");
  small.set("E7", "replicas", "200");
  bool same = true;
  for (const std::string id : {"E6", "E7"}) {
    RunOptions one = opt, many = opt;
    one.workers = 1;
    many.workers = 3;
    const auto a = to_csv(run_experiment(id, small, one));
    const auto b = to_csv(run_experiment(id, small, many));
    const auto c = to_csv(run_experiment(id, small, one));
    same = same && a == b && a == c;
  }
  r.table.add({"determinism", "2", same ? "1" : "0", "E6 and E7 CSV with 1 and 3 workers, and a rerun"});
  r.criteria.push_back(criterion_true("byte_identical_reruns", "A8", same, "identical CSV bytes"));
  r.budget.push_back({"bm_grid_dt", dt});
  r.budget.push_back({"v_floor", v_floor});
  return r;
}

}  // namespace slowtrap::detail
