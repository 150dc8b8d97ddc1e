// E6: extremal and sum processes of an i.i.d. sequence against the Frechet
// law. E7: record-set tightness.

#include <algorithm>
#include <cmath>
#include <limits>

#include "experiments.hpp"
#include "slowtrap/lattice.hpp"
#include "slowtrap/parallel.hpp"
#include "slowtrap/stats.hpp"

namespace slowtrap::detail {
namespace {

struct SeqRow {
  std::vector<double> max_v;  ///< (1/n) L(M_{nt})
  std::vector<double> sum_v;  ///< (1/n) L(Sigma_{nt})
};

std::vector<SeqRow> sequence_samples(const TailFamily& f, std::size_t n, const std::vector<double>& ts,
                                     std::size_t replicas, const RunOptions& opt, std::uint64_t salt) {
  std::vector<std::size_t> cut;
  for (double t : ts) cut.push_back(static_cast<std::size_t>(std::floor(static_cast<double>(n) * t)));
  const std::size_t last = *std::max_element(cut.begin(), cut.end());
  const double log_n = std::log(static_cast<double>(n));
  return parallel_map(replicas, opt.workers, [&](std::size_t r) {
    Rng rng = replica_stream(opt, salt, r);
    SeqRow row;
    row.max_v.assign(ts.size(), 0.0);
    row.sum_v.assign(ts.size(), 0.0);
    double max_log = -std::numeric_limits<double>::infinity();
    LogSum sum;
    auto record = [&](std::size_t i) {
      for (std::size_t j = 0; j < cut.size(); ++j) {
        if (cut[j] != i) continue;
        row.max_v[j] = i == 0 ? 0.0 : std::exp(f.log_L(max_log) - log_n);
        row.sum_v[j] = i == 0 ? 0.0 : std::exp(f.log_L(sum.log_value()) - log_n);
      }
    };
    record(0);
    for (std::size_t i = 1; i <= last; ++i) {
      const double lt = sample_log_trap(f, unit_exponential(rng));
      max_log = std::max(max_log, lt);
      sum.add_log(lt);
      record(i);
    }
    return row;
  });
}

}  // namespace

ExperimentResult run_e6(const Config& cfg, const RunOptions& opt) {
  const std::string sec = "E6";
  const auto family = family_from(cfg, sec, "family", "gamma", "log_pareto", 1.0);
  const auto contrast = TailFamily::regular(cfg.get_double(sec, "contrast_alpha", 0.5));
  const auto n = static_cast<std::size_t>(cfg.get_int(sec, "n", 10000));
  const auto ts = cfg.get_doubles(sec, "t", {0.5, 1.0});
  const std::size_t replicas = replicas_from(cfg, sec, 2000);
  const double max_thr = cfg.get_double(sec, "max_threshold", 0.02);
  const double sum_thr = cfg.get_double(sec, "sum_threshold", 0.05);
  const double con_thr = cfg.get_double(sec, "contrast_threshold", 0.1);
  for (double t : ts)
    if (!(t > 0.0)) throw ConfigError("E6.t: values must be positive");

  const auto main = sequence_samples(family, n, ts, replicas, opt, salt_of("E6.main", n));
  const auto con = sequence_samples(contrast, n, ts, replicas, opt, salt_of("E6.contrast", n));

  ExperimentResult r;
  r.id = "E6";
  r.table.columns = {"family", "n", "t", "replicas", "ks_max", "ks_sum"};
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double t = ts[j];
    const auto frechet = [t](double v) { return v <= 0.0 ? 0.0 : std::exp(-t / v); };
    auto ks_of = [&](const std::vector<SeqRow>& rows, bool use_max) {
      std::vector<double> x;
      for (const auto& row : rows) x.push_back(use_max ? row.max_v[j] : row.sum_v[j]);
      return ks_vs_cdf(x, frechet).statistic;
    };
    const double km = ks_of(main, true), ksum = ks_of(main, false);
    const double cm = ks_of(con, true), csum = ks_of(con, false);
    r.table.add({family.describe(), fmt(n), fmt(t), fmt(replicas), fmt(km), fmt(ksum)});
    r.table.add({contrast.describe(), fmt(n), fmt(t), fmt(replicas), fmt(cm), fmt(csum)});
    r.criteria.push_back(criterion_below("ks_max_t" + fmt(t), "A1", km, max_thr));
    r.criteria.push_back(criterion_below("ks_sum_t" + fmt(t), "A1", ksum, sum_thr));
    r.criteria.push_back(criterion_above("contrast_ks_sum_t" + fmt(t), "A1", csum, con_thr));
  }
  // max-index discreteness: P(M_{nt} <= v) = (1 - 1/(n v))^{nt} against exp(-t/v)
  r.budget.push_back({"max_index_discreteness_bound", 1.0 / static_cast<double>(n)});
  r.budget.push_back({"ks_sampling_scale", 1.0 / std::sqrt(static_cast<double>(replicas))});
  return r;
}

ExperimentResult run_e7(const Config& cfg, const RunOptions& opt) {
  const std::string sec = "E7";
  const double C = cfg.get_double(sec, "C", 4.0);
  const auto ns = cfg.get_doubles(sec, "n", {1e3, 1e4, 1e5});
  const std::size_t replicas = replicas_from(cfg, sec, 2000);
  const double spread = cfg.get_double(sec, "count_spread", 2.0);
  const double sep_floor = cfg.get_double(sec, "sep_q10_floor", 0.0);
  if (!(C >= 1.0)) throw ConfigError("E7.C must be >= 1");

  ExperimentResult r;
  r.id = "E7";
  r.table.columns = {"C", "n", "replicas", "count_mean", "count_q90", "sep_over_n_q10"};
  auto window_stats = [&](double c, double nd, std::uint64_t salt) {
    struct Out {
      std::vector<double> count, sep;
    } out;
    const auto lo = static_cast<std::size_t>(std::floor(nd / c));
    const auto hi = static_cast<std::size_t>(std::floor(nd * c));
    const auto rows = parallel_map(replicas, opt.workers, [&](std::size_t rep) {
      Rng rng = replica_stream(opt, salt, rep);
      std::vector<std::size_t> in;
      for (const auto& d : sample_exponential_records(hi, rng))
        if (d.index > lo && d.index <= hi) in.push_back(d.index);
      return std::pair<double, double>(static_cast<double>(in.size()), sep(in) / nd);
    });
    for (const auto& [k, s] : rows) {
      out.count.push_back(k);
      out.sep.push_back(s);
    }
    return out;
  };

  std::vector<double> q90s, q10s;
  for (double nd : ns) {
    const auto w = window_stats(C, nd, salt_of("E7", static_cast<std::uint64_t>(nd)));
    q90s.push_back(quantile(w.count, 0.9));
    q10s.push_back(quantile(w.sep, 0.1));
    r.table.add({fmt(C), fmt(nd), fmt(replicas), fmt(mean(w.count)), fmt(q90s.back()), fmt(q10s.back())});
  }
  const double q90_range = *std::max_element(q90s.begin(), q90s.end()) - *std::min_element(q90s.begin(), q90s.end());
  r.criteria.push_back(criterion_below("count_q90_spread_over_n", "", q90_range, spread));
  r.criteria.push_back(criterion_above("sep_over_n_q10_min", "", *std::min_element(q10s.begin(), q10s.end()), sep_floor));

  // C = 1: the window (n, n] is empty
  const auto w1 = window_stats(1.0, ns.front(), salt_of("E7.C1"));
  const bool empty = std::all_of(w1.count.begin(), w1.count.end(), [](double k) { return k == 0.0; });
  r.criteria.push_back(criterion_true("C1_counts_zero", "", empty, "all counts 0"));
  r.budget.push_back({"replicas", static_cast<double>(replicas)});
  r.budget.push_back({"pinned_sep_q10_floor", sep_floor});
  return r;
}

}  // namespace slowtrap::detail
