#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "slowtrap/continuum.hpp"
#include "slowtrap/rng.hpp"
#include "slowtrap/stats.hpp"

using namespace slowtrap;
using doctest::Approx;

namespace {

// Enlarges the window until the path stays inside it.
void fit_window(MarkedPointSet& pts, const GridPath& bm, Rng& rng) {
  const auto [lo, hi] = std::minmax_element(bm.values.begin(), bm.values.end());
  const double need = std::max(-*lo, *hi) + 1.0;
  if (need > pts.W) extend_window(pts, need, rng);
}

void fit_window(MarkedPointSet& pts, const BmPath& bm, Rng& rng) {
  const double hi = *std::max_element(bm.cell_max.begin(), bm.cell_max.end());
  const double lo = *std::min_element(bm.cell_min.begin(), bm.cell_min.end());
  const double need = std::max(-lo, hi) + 1.0;
  if (need > pts.W) extend_window(pts, need, rng);
}

}  // namespace

TEST_CASE("point count and mark law") {
  Rng rng(1);
  const double W = 5.0, vf = 0.1;
  std::vector<double> counts, marks;
  for (int r = 0; r < 2000; ++r) {
    const auto p = sample_points(W, vf, rng);
    counts.push_back(static_cast<double>(p.size()));
    CHECK(std::is_sorted(p.x.begin(), p.x.end()));
    for (std::size_t k = 0; k < p.size(); ++k) {
      CHECK(std::abs(p.x[k]) <= W);
      marks.push_back(p.v[k]);
    }
  }
  // Poisson(2W / v_floor): mean and variance both 100
  CHECK(std::abs(mean(counts) - 100.0) < 3.0 * std::sqrt(100.0 / 2000.0));
  CHECK(variance(counts) == Approx(100.0).epsilon(0.1));
  const auto ks = ks_vs_cdf(marks, [&](double v) { return v <= vf ? 0.0 : 1.0 - vf / v; }, 0.01);
  CHECK(ks.pass);
}

TEST_CASE("window extension and floor lowering add the right points") {
  Rng rng(2);
  std::vector<double> added_w, added_f, low_marks;
  for (int r = 0; r < 1000; ++r) {
    auto p = sample_points(2.0, 1.0, rng);
    const auto n0 = p.size();
    const auto x0 = p.x;
    extend_window(p, 5.0, rng);
    CHECK(p.W == 5.0);
    added_w.push_back(static_cast<double>(p.size() - n0));
    for (double x : x0) CHECK(std::binary_search(p.x.begin(), p.x.end(), x));
    const auto n1 = p.size();
    lower_floor(p, 0.5, rng);
    added_f.push_back(static_cast<double>(p.size() - n1));
    for (double v : p.v) {
      CHECK(v > 0.5);
      if (v <= 1.0) low_marks.push_back(v);
    }
  }
  // strips of total length 6 at floor 1; new marks: 10 * (1/0.5 - 1)
  CHECK(mean(added_w) == Approx(6.0).epsilon(0.05));
  CHECK(mean(added_f) == Approx(10.0).epsilon(0.05));
  // marks in (0.5, 1] have density ~ v^-2: P(V <= v) = (2 - 1/v)
  const auto ks = ks_vs_cdf(low_marks, [](double v) { return std::clamp(2.0 - 1.0 / v, 0.0, 1.0); }, 0.02);
  CHECK(ks.pass);
  CHECK_THROWS(make_points({0.0}, {0.5}, 1.0, 1.0));
  CHECK_THROWS(make_points({2.0}, {3.0}, 1.0, 1.0));
}

TEST_CASE("Brownian variance and range") {
  Rng rng(3);
  std::vector<double> end;
  for (int r = 0; r < 20000; ++r) end.push_back(sample_bm(2.0, 0.01, rng).values.back());
  CHECK(variance(end) == Approx(2.0).epsilon(0.05));

  // E range on [0, 1] = 2 sqrt(2 / pi)
  std::vector<double> range;
  for (int r = 0; r < 5000; ++r) range.push_back(bm_range(sample_bm_path(1.0, 1e-3, rng), 1.0));
  CHECK(mean(range) == Approx(2.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(0.02));
}

TEST_CASE("bridge maximum") {
  // u = 1 gives the larger end point; the law is P(M > m) = exp(-2(m-a)(m-b)/dt)
  CHECK(bridge_max(0.0, 1.0, 0.5, 1.0) == Approx(1.0));
  CHECK(bridge_max(2.0, -1.0, 0.5, 1.0) == Approx(2.0));
  const double m = bridge_max(0.2, 0.5, 0.1, 0.3);
  CHECK(std::exp(-2.0 * (m - 0.2) * (m - 0.5) / 0.1) == Approx(0.3));
}

TEST_CASE("extension of a Brownian path keeps the prefix") {
  Rng a(4), b(4);
  auto p = sample_bm_path(1.0, 0.01, a);
  const auto prefix = p.grid.values;
  const auto pmax = p.cell_max;
  extend_bm(p, 2.0, a);
  CHECK(p.grid.values.size() == 201);
  CHECK(p.cell_max.size() == 200);
  for (std::size_t k = 0; k < prefix.size(); ++k) CHECK(p.grid.values[k] == prefix[k]);
  for (std::size_t k = 0; k < pmax.size(); ++k) CHECK(p.cell_max[k] == pmax[k]);
  for (std::size_t k = 0; k < p.cell_max.size(); ++k) {
    CHECK(p.cell_max[k] >= std::max(p.grid.values[k], p.grid.values[k + 1]));
    CHECK(p.cell_min[k] <= std::min(p.grid.values[k], p.grid.values[k + 1]));
  }
}

TEST_CASE("record covers agree with hitting times and a brute-force maximum") {
  Rng rng(5);
  for (int r = 0; r < 30; ++r) {
    auto bm = sample_bm_path(1.0, 1e-3, rng);
    auto pts = sample_points(1.0, 0.05, rng);
    fit_window(pts, bm, rng);
    const auto rec = record_covers(pts, bm);
    for (std::size_t j = 0; j < rec.size(); ++j) {
      CHECK(rec[j].time == Approx(hitting_time(bm, rec[j].x)));
      if (j > 0) {
        CHECK(rec[j].v > rec[j - 1].v);
        CHECK(rec[j].time >= rec[j - 1].time);
      }
    }
    const auto m = explored_extremal_process(pts, bm);
    m.validate();
    double hi = 0.0, lo = 0.0;
    for (std::size_t k = 0; k < bm.cell_max.size(); k += 37) {
      hi = std::max(hi, *std::max_element(bm.cell_max.begin(), bm.cell_max.begin() + static_cast<std::ptrdiff_t>(k + 1)));
      lo = std::min(lo, *std::min_element(bm.cell_min.begin(), bm.cell_min.begin() + static_cast<std::ptrdiff_t>(k + 1)));
      double best = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts.x[i] >= lo && pts.x[i] <= hi) best = std::max(best, pts.v[i]);
      CHECK(m.at(1e-3 * static_cast<double>(k + 1)) == best);
    }
  }
  // a range beyond the window is reported
  Rng r2(6);
  const auto bm = sample_bm_path(4.0, 1e-3, r2);
  const auto tiny = sample_points(0.01, 0.1, r2);
  CHECK_THROWS_AS(record_covers(tiny, bm), WindowExhausted);
}

TEST_CASE("law of m^B_1 matches E exp(-range / v)") {
  // given the range d, the number of covered points with mark > v is Poisson(d / v)
  Rng rng(7);
  const std::vector<double> levels = {0.5, 1.0, 2.0};
  std::vector<double> hit(levels.size(), 0.0), laplace(levels.size(), 0.0);
  const int reps = 5000;
  for (int r = 0; r < reps; ++r) {
    const auto bm = sample_bm_path(1.0, 1e-3, rng);
    auto pts = sample_points(4.0, 0.25, rng);
    fit_window(pts, bm, rng);
    const double m1 = explored_extremal_process(pts, bm).final_value();
    const double d = bm_range(bm, 1.0);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      hit[j] += m1 <= levels[j];
      laplace[j] += std::exp(-d / levels[j]);
    }
  }
  for (std::size_t j = 0; j < levels.size(); ++j) {
    CAPTURE(levels[j]);
    CHECK(std::abs(hit[j] - laplace[j]) / reps < 0.02);
  }
}

TEST_CASE("localization example") {
  const auto pts = make_points({-0.5, 0.2, 0.8}, {3.0, 1.5, 5.0}, 1.0, 1.0);
  const auto loc = localization_sites(pts, 2.0);
  CHECK(loc.z1 == 0.8);
  CHECK(loc.z2 == -0.5);
  CHECK(loc.p1 == Approx(0.5 / 1.3));
  CHECK(loc.p2 == Approx(0.8 / 1.3));
  const auto sym = localization_sites(make_points({-1.0, 1.0}, {5.0, 5.0}, 2.0, 1.0), 2.0);
  CHECK(sym.p1 == Approx(0.5));
  CHECK_THROWS_AS(localization_sites(make_points({0.3}, {5.0}, 1.0, 1.0), 2.0), WindowExhausted);
  CHECK_THROWS(localization_sites(pts, 0.5));

  // first passage of a simulated path to 0.8 before -0.5
  Rng rng(8);
  int up = 0, n = 0;
  for (int r = 0; r < 2000; ++r) {
    const auto bm = sample_bm_path(4.0, 1e-3, rng);
    const double a = hitting_time(bm, loc.z1), b = hitting_time(bm, loc.z2);
    if (!std::isfinite(a) && !std::isfinite(b)) continue;
    up += a < b;
    ++n;
  }
  const double p = static_cast<double>(up) / n;
  CHECK(std::abs(p - loc.p1) < 3.0 * std::sqrt(loc.p1 * loc.p2 / n));
}

TEST_CASE("extremal FIN sits on the flanking deep sites") {
  Rng rng(9);
  const double t = 1.0;
  double hits = 0.0, weight = 0.0;
  int n = 0;
  for (int r = 0; r < 400; ++r) {
    auto pts = sample_points(6.0, 0.2, rng);
    auto bm = sample_bm_path(20.0, 2e-3, rng);
    fit_window(pts, bm, rng);
    Localization loc{};
    for (;;) {
      try {
        loc = localization_sites(pts, t);
        break;
      } catch (const WindowExhausted&) {
        extend_window(pts, pts.W + 5.0, rng);
      }
    }
    StepPath z;
    try {
      z = extremal_fin_path(pts, bm, 2.0 * t);
    } catch (const std::runtime_error&) {
      continue;
    }
    const double zt = z.at(t);
    CHECK((zt == loc.z1 || zt == loc.z2));
    hits += zt == loc.z1;
    weight += loc.p1;
    ++n;
  }
  REQUIRE(n > 350);
  // E 1{Z_t = z1} = E p1; each indicator has variance at most 1/4
  CHECK(std::abs(hits - weight) / n < 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("occupation identity and mean local time at zero") {
  Rng rng(10);
  const auto bm = sample_bm(1.0, 1e-4, rng);
  const double h = 0.01;
  double total = 0.0;
  for (int k = -600; k <= 600; ++k) total += h * bm_local_time(bm, h * k, 1.0, h);
  CHECK(total == Approx(1.0).epsilon(0.01));

  std::vector<double> l0;
  for (int r = 0; r < 8000; ++r) l0.push_back(bm_local_time(sample_bm(1.0, 1e-4, rng), 0.0, 1.0, h));
  CHECK(mean(l0) == Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.03));
}

TEST_CASE("FIN clock: direct sum and path agree") {
  Rng rng(11);
  const auto bm = sample_bm(2.0, 1e-3, rng);
  auto pts = sample_points(3.0, 0.01, rng);
  fit_window(pts, bm, rng);
  for (double alpha : {0.2, 0.5, 0.8}) {
    for (bool comp : {false, true}) {
      const FinClockOptions opt{0.0, comp};
      const auto path = fin_clock_path(pts, bm, alpha, opt);
      CHECK(path.values.size() == bm.values.size());
      for (std::size_t k = 1; k < path.values.size(); ++k) CHECK(path.values[k] >= path.values[k - 1]);
      for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const auto k = static_cast<std::size_t>(std::llround(t / bm.dt));
        CHECK(fin_clock(pts, bm, alpha, t, opt) == Approx(path.values[k]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("FIN clock of a single point") {
  Rng rng(12);
  const auto bm = sample_bm(1.0, 1e-4, rng);
  const auto pts = make_points({0.1}, {2.0}, 5.0, 1.0);
  const double h = std::sqrt(bm.dt);
  for (double alpha : {0.3, 0.7})
    CHECK(fin_clock(pts, bm, alpha, 1.0) == Approx(bm_local_time(bm, 0.1, 1.0, h) * std::pow(2.0, 1.0 / alpha)));
}

TEST_CASE("halving the floor moves the clock by less than the compensator") {
  Rng rng(13);
  const double alpha = 0.5, vf = 0.02, t = 1.0;
  std::vector<double> change;
  for (int r = 0; r < 200; ++r) {
    const auto bm = sample_bm(t, 1e-3, rng);
    auto pts = sample_points(4.0, vf, rng);
    fit_window(pts, bm, rng);
    const double before = fin_clock(pts, bm, alpha, t);
    lower_floor(pts, vf / 2.0, rng);
    const double after = fin_clock(pts, bm, alpha, t);
    CHECK(after >= before);
    change.push_back(after - before);
  }
  CHECK(mean(change) < small_mark_compensator(alpha, vf, t));
  // the expected change is compensator(vf) - compensator(vf / 2)
  CHECK(mean(change) == Approx(small_mark_compensator(alpha, vf, t) / 2.0).epsilon(0.15));
  CHECK(small_mark_compensator(alpha, floor_for_bias(alpha, 1e-3), 1.0) == Approx(1e-3));
}

TEST_CASE("FIN variance grows like t^(2 alpha / (1 + alpha))") {
  Rng rng(14);
  const double alpha = 0.5;
  const std::vector<double> levels = {0.03, 0.1, 0.3, 1.0};
  std::vector<std::vector<double>> z(levels.size());
  const FinClockOptions opt{0.0, true};
  for (int r = 0; r < 300; ++r) {
    const auto bm = sample_bm(10.0, 1e-4, rng);
    auto pts = sample_points(10.0, floor_for_bias(alpha, 1e-3), rng);
    fit_window(pts, bm, rng);
    const auto clock = fin_clock_path(pts, bm, alpha, opt);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double s = first_exceed_time(clock, levels[j]);
      REQUIRE(std::isfinite(s));
      z[j].push_back(bm.at(s));
    }
  }
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    lx.push_back(std::log(levels[j]));
    ly.push_back(std::log(variance(z[j])));
  }
  const auto fit = linear_fit(lx, ly);
  CHECK(std::abs(fit.slope - 2.0 * alpha / (1.0 + alpha)) < 0.15);
}

TEST_CASE("fin_path samples B at the inverse clock") {
  Rng rng(15);
  const auto bm = sample_bm(5.0, 1e-3, rng);
  auto pts = sample_points(6.0, 0.01, rng);
  fit_window(pts, bm, rng);
  const auto clock = fin_clock_path(pts, bm, 0.5);
  const double top = 0.5 * clock.values.back();
  const auto f = fin_path(clock, bm, top, 50);
  f.validate();
  for (int j = 0; j < 50; j += 7) {
    const double t = top * j / 50.0;
    CHECK(f.at(t) == Approx(bm.at(first_exceed_time(clock, t))));
  }
  CHECK_THROWS(fin_path(clock, bm, 2.0 * clock.values.back(), 10));
}

TEST_CASE("Kanter variates have the stable Laplace transform") {
  Rng rng(16);
  for (double beta : {0.3, 0.5, 0.8}) {
    CAPTURE(beta);
    std::vector<double> e;
    for (int r = 0; r < 100000; ++r) e.push_back(std::exp(-stable_subordinator_unit(beta, rng)));
    CHECK(std::abs(mean(e) - std::exp(-1.0)) < 4.0 * std_error(e));
  }
}

TEST_CASE("fractional kinetics second moment") {
  // E FK_t^2 = E E_t = t^beta / Gamma(1 + beta)
  Rng rng(17);
  const double beta = 0.5;
  std::vector<double> lx, ly;
  for (double t : {1.0, 10.0, 100.0}) {
    std::vector<double> x, x2, e2;
    for (int r = 0; r < 3000; ++r) {
      const double v = fk_marginal(beta, t, rng);
      x.push_back(v);
      x2.push_back(v * v);
      const double w = fk_marginal_exact(beta, t, rng);
      e2.push_back(w * w);
    }
    const double target = std::pow(t, beta) / std::tgamma(1.0 + beta);
    CHECK(std::abs(mean(x)) < 3.0 * std_error(x));
    CHECK(std::abs(mean(x2) - target) < 4.0 * std_error(x2));
    CHECK(std::abs(mean(e2) - target) < 4.0 * std_error(e2));
    lx.push_back(std::log(t));
    ly.push_back(std::log(mean(x2)));
  }
  CHECK(std::abs(linear_fit(lx, ly).slope - beta) < 0.1);

  std::vector<double> near;
  for (int r = 0; r < 4000; ++r) near.push_back(fk_marginal(0.95, 1.0, rng));
  CHECK(variance(near) == Approx(1.0).epsilon(0.1));
  CHECK(fk_marginal(0.5, 0.0, rng) == 0.0);
}

TEST_CASE("sum-to-max: (m^{B,alpha})^alpha approaches m^B") {
  Rng rng(18);
  const std::vector<double> alphas = {0.5, 0.3, 0.2, 0.1, 0.05};
  std::vector<std::vector<double>> err(alphas.size());
  for (int r = 0; r < 41; ++r) {
    auto bmp = sample_bm_path(1.0, 1e-4, rng);
    auto pts = sample_points(4.0, 0.01, rng);
    fit_window(pts, bmp, rng);
    const double m = explored_extremal_process(pts, bmp).final_value();
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      const double c = fin_clock(pts, bmp.grid, alphas[j], 1.0);
      err[j].push_back(std::abs(std::pow(c, alphas[j]) - m) / m);
    }
  }
  for (std::size_t j = 1; j < alphas.size(); ++j) CHECK(median(err[j]) < median(err[j - 1]));
  CHECK(median(err.back()) < 0.1);
}

TEST_CASE("near alpha = 1 the scaled clock is close to t") {
  Rng rng(19);
  const double alpha = 0.99;
  const FinClockOptions opt{0.0, true};
  std::vector<double> sup;
  for (int r = 0; r < 21; ++r) {
    const auto bm = sample_bm(1.0, 1e-4, rng);
    auto pts = sample_points(3.0, 1e-4, rng);
    fit_window(pts, bm, rng);
    const auto clock = fin_clock_path(pts, bm, alpha, opt);
    double worst = 0.0;
    for (std::size_t k = 0; k < clock.values.size(); ++k)
      worst = std::max(worst, std::abs((1.0 - alpha) * clock.values[k] - bm.dt * static_cast<double>(k)));
    sup.push_back(worst);
  }
  CHECK(median(sup) < 0.1);
}

TEST_CASE("enlarging the window or lowering the floor keeps the explored process") {
  Rng rng(20);
  for (int r = 0; r < 20; ++r) {
    const auto bm = sample_bm_path(1.0, 1e-3, rng);
    auto pts = sample_points(4.0, 0.1, rng);
    fit_window(pts, bm, rng);
    const auto m0 = explored_extremal_process(pts, bm);
    extend_window(pts, pts.W + 3.0, rng);
    const auto m1 = explored_extremal_process(pts, bm);
    CHECK(m1.jump_times == m0.jump_times);
    CHECK(m1.values == m0.values);
    lower_floor(pts, 0.01, rng);
    const auto m2 = explored_extremal_process(pts, bm);
    for (double t = 0.0; t <= 1.0; t += 0.01)
      if (m0.at(t) > 0.0) CHECK(m2.at(t) == m0.at(t));
  }
}
