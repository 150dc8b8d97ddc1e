// Pilot run for the pinned constants file. Statistics without a fixed
// target are measured at three times the replica budget, as three
// independent batches of the standard size; the pinned bound is the least
// favourable batch value less three batch-to-batch standard deviations, so a
// standard-size run with another seed clears it with high probability.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "experiments.hpp"
#include "slowtrap/stats.hpp"

namespace slowtrap {
namespace {

double column_value(const ExperimentResult& r, std::size_t row, std::size_t col) {
  return std::stod(r.table.rows.at(row).at(col));
}

}  // namespace

std::string run_pilot(const Config& cfg, const RunOptions& opt, const std::filesystem::path& out) {
  const auto e7_reps = static_cast<std::size_t>(cfg.get_int("E7", "replicas", 2000));
  std::vector<double> seps;
  double q90_max = 0.0;
  std::ostringstream batches;
  for (std::uint64_t b = 0; b < 3; ++b) {
    Config c = cfg;
    c.set("E7", "replicas", std::to_string(e7_reps));
    RunOptions o = opt;
    o.seed = derive_seed(opt.seed, 1000 + b);
    const auto r = detail::run_e7(c, o);
    for (std::size_t row = 0; row < r.table.rows.size(); ++row) {
      seps.push_back(column_value(r, row, 5));
      q90_max = std::max(q90_max, column_value(r, row, 4));
      batches << "# batch " << b << " n=" << r.table.rows[row][1] << " count_q90=" << r.table.rows[row][4]
              << " sep_over_n_q10=" << r.table.rows[row][5] << '\n';
    }
  }

  const double sep_floor = *std::min_element(seps.begin(), seps.end()) - 3.0 * std::sqrt(variance(seps));

  std::ostringstream text;
  text << "# Pinned constants. Regenerate with `slowtrap pilot`; edits here change regression bounds.\n"
       << "# Tolerances without a theoretical rate are engineering choices.\n"
       << "[general]\nversion = 1\n\n"
       << "[E1]\nks_threshold = 0.08\n\n"
       << "[E2]\nks_threshold = 0.08\n\n"
       << "[E3]\nks_threshold = 0.12\nproxy_threshold = 0.8\n\n"
       << "[E6]\nmax_threshold = 0.02\nsum_threshold = 0.05\ncontrast_threshold = 0.1\n\n"
       << "[E7]\n"
       << "# pilot: 3 batches of " << e7_reps << " replicas, seed " << opt.seed << "\n"
       << batches.str() << "count_spread = 2\n"
       << "count_q90 = " << format_double(q90_max) << "\n"
       << "sep_q10_floor = " << format_double(sep_floor) << "\n\n"
       << "[E8]\nvar_low = 0.9\nvar_high = 1.1\nks_threshold = 0.08\nslope_tolerance = 0.12\noracle_tolerance = 0.05\n"
       << "contrast_slope_max = 0.2\n";
  if (!out.empty()) {
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f << text.str();
  }
  return text.str();
}

}  // namespace slowtrap
