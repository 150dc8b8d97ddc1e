#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "slowtrap/cadlag.hpp"
#include "slowtrap/rng.hpp"

using namespace slowtrap;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// J1 distance from f to g = g0 on [0, tg), g1 on [tg, T], by direct
// minimisation over where the warp sends tg. With one jump in g, a warp is
// determined (up to cost) by s = lambda(tg): the time cost is |s - tg| and
// the value cost is max(sup_{[0,s)} |f - g0|, sup_{[s,T]} |f - g1|).
double j1_single_jump_oracle(const StepPath& f, double tg, double g0, double g1, double T) {
  std::vector<double> s{0.0};
  std::vector<double> v{f.initial_value};
  for (std::size_t k = 0; k < f.jump_count(); ++k) {
    s.push_back(f.jump_times[k]);
    v.push_back(f.values[k]);
  }
  s.push_back(T);
  double best = kInf;
  const std::size_t p = v.size();
  for (std::size_t j = 0; j < p; ++j) {
    // warp target inside piece j: (s_j, s_{j+1}), or exactly s_j
    auto cost = [&](double target, bool at_left_end) {
      double before = 0.0, after = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        const bool in_before = i < j || (i == j && !at_left_end);
        const bool in_after = i >= j;
        if (in_before) before = std::max(before, std::fabs(v[i] - g0));
        if (in_after) after = std::max(after, std::fabs(v[i] - g1));
      }
      return std::max({std::fabs(target - tg), before, after});
    };
    if (j > 0) best = std::min(best, cost(s[j], true));
    const double lo = s[j], hi = s[j + 1];
    const double nearest = std::clamp(tg, lo, hi);
    if (hi > lo) best = std::min(best, cost(nearest, false));
  }
  return best;
}

StepPath random_step_path(Rng& rng, double T, int max_jumps, double scale = 1.0) {
  StepPath f(scale * standard_normal(rng), T);
  const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(max_jumps + 1));
  std::vector<double> times;
  for (int i = 0; i < k; ++i) times.push_back(T * (0.02 + 0.96 * uniform_open(rng)));
  std::sort(times.begin(), times.end());
  for (double t : times) f.push_jump(t, scale * standard_normal(rng));
  f.horizon = T;
  return f;
}

}  // namespace

TEST_CASE("step path evaluation and push_jump semantics") {
  StepPath f(1.0, 3.0);
  f.push_jump(0.0, 2.0);
  CHECK(f.initial_value == 2.0);
  f.push_jump(1.0, 5.0);
  f.push_jump(1.0, 6.0);  // same time replaces
  f.push_jump(2.0, 6.0);  // no-op jump dropped
  CHECK(f.jump_count() == 1);
  CHECK(f.at(0.5) == 2.0);
  CHECK(f.at(1.0) == 6.0);
  CHECK(f.left_limit(1.0) == 2.0);
  CHECK(f.at(10.0) == 6.0);
  CHECK_NOTHROW(f.validate());
  f.push_jump(4.0, 1.0);
  CHECK(f.horizon == 4.0);
  CHECK(f.truncated(3.0).jump_count() == 1);
}

TEST_CASE("L1 distance") {
  const auto f = StepPath::indicator_from(1.0, 3.0);
  const auto g = StepPath::indicator_from(1.25, 3.0);
  CHECK(d_L1(f, f, 3.0) == 0.0);
  CHECK(d_L1(f, g, 3.0) == Approx(0.25));
  CHECK(d_sup(f, g, 3.0) == 1.0);
}

TEST_CASE("J1 distance of a shifted indicator is the shift") {
  const auto f = StepPath::indicator_from(1.0, 3.0);
  CHECK(d_J1(f, f, 3.0) == 0.0);
  for (double delta : {0.01, 0.1, 0.3, 0.7}) {
    const auto g = StepPath::indicator_from(1.0 + delta, 3.0);
    CHECK(d_J1(f, g, 3.0) == Approx(delta).epsilon(1e-9));
  }
}

TEST_CASE("J1 against the single-jump warp oracle on random paths") {
  Rng rng(8);
  for (int rep = 0; rep < 300; ++rep) {
    const double T = 2.0;
    const auto f = random_step_path(rng, T, 6);
    const double tg = T * (0.05 + 0.9 * uniform_open(rng));
    const double g0 = standard_normal(rng), g1 = standard_normal(rng);
    StepPath g(g0, T);
    g.push_jump(tg, g1);
    g.horizon = T;
    CAPTURE(rep);
    CHECK(d_J1(f, g, T) == Approx(j1_single_jump_oracle(f, tg, g0, g1, T)).epsilon(1e-9));
    CHECK(d_J1(g, f, T) == Approx(d_J1(f, g, T)).epsilon(1e-12));
  }
}

TEST_CASE("M1 on simple pairs") {
  const auto f = StepPath::indicator_from(1.0, 3.0);
  CHECK(d_M1(f, f, 3.0).distance == Approx(0.0).scale(1.0));
  // two half-jumps close together against one full jump
  StepPath g(0.0, 3.0);
  g.push_jump(1.0, 0.5);
  g.push_jump(1.1, 1.0);
  const auto r = d_M1(f, g, 3.0);
  CHECK(r.distance <= 0.1 + 1e-9);
  CHECK(r.distance >= 0.05 - 1e-9);  // must pair the 0.5 level of one graph with some time gap
  CHECK(d_J1(f, g, 3.0) >= r.distance - 1e-9);
}

TEST_CASE("continuous M1 agrees with the discrete Frechet oracle") {
  Rng rng(21);
  for (int rep = 0; rep < 60; ++rep) {
    const double T = 1.5;
    const auto f = random_step_path(rng, T, 4, 0.5);
    const auto g = random_step_path(rng, T, 4, 0.5);
    const double cont = d_M1(f, g, T).distance;
    const auto disc = d_M1_discrete(f, g, T, 0.002, 8192);
    CAPTURE(rep);
    // sampled matchings are a subset of continuous ones
    CHECK(cont <= disc.distance + 1e-9);
    // and the sampled optimum is within one sample spacing of the continuum
    const double len = 2.0 * (T + 8.0 * 3.0);
    CHECK(disc.distance - cont <= 2.0 * len / static_cast<double>(disc.samples) + 1e-9);
  }
}

TEST_CASE("metric properties on random triples") {
  Rng rng(33);
  for (int rep = 0; rep < 100; ++rep) {
    const double T = 2.0;
    const auto f = random_step_path(rng, T, 5);
    const auto g = random_step_path(rng, T, 5);
    const auto h = random_step_path(rng, T, 5);
    CAPTURE(rep);
    const double j_fg = d_J1(f, g, T), j_gh = d_J1(g, h, T), j_fh = d_J1(f, h, T);
    const double m_fg = d_M1(f, g, T).distance, m_gh = d_M1(g, h, T).distance, m_fh = d_M1(f, h, T).distance;
    const double l_fg = d_L1(f, g, T), l_gh = d_L1(g, h, T), l_fh = d_L1(f, h, T);
    CHECK(j_fg == Approx(d_J1(g, f, T)));
    CHECK(m_fg == Approx(d_M1(g, f, T).distance).epsilon(1e-8));
    CHECK(l_fg == Approx(d_L1(g, f, T)));
    CHECK(j_fh <= j_fg + j_gh + 1e-9);
    CHECK(m_fh <= m_fg + m_gh + 1e-8);
    CHECK(l_fh <= l_fg + l_gh + 1e-9);
    // ordering of the modes
    CHECK(m_fg <= j_fg + 1e-8);
    CHECK(l_fg <= T * d_sup(f, g, T) + 1e-9);
  }
}

TEST_CASE("figure example 1: J1 distance is exactly 1/n") {
  const auto lim = StepPath::indicator_from(1.0, 3.0);
  for (int n : {4, 8, 16, 32, 64}) {
    CHECK(d_J1(figure_example1(n), lim, 3.0) == Approx(1.0 / n).epsilon(1e-12));
    CHECK(j1_single_jump_oracle(figure_example1(n), 1.0, 0.0, 1.0, 3.0) == Approx(1.0 / n));
  }
}

TEST_CASE("figure example 2: M1 but not J1") {
  const auto lim = StepPath::indicator_from(1.0, 3.0);
  for (int n : {4, 8, 16, 32}) {
    CAPTURE(n);
    const auto f = figure_example2(n);
    const double j1 = d_J1(f, lim, 3.0);
    CHECK(j1 >= 0.2);
    CHECK(j1 == Approx(j1_single_jump_oracle(f, 1.0, 0.0, 1.0, 3.0)).epsilon(1e-9));
    CHECK(d_M1(f, lim, 3.0).distance <= 2.0 / n);
  }
}

TEST_CASE("figure example 3: L1 but not M1") {
  const auto lim = StepPath::indicator_from(1.0, 3.0);
  double prev = kInf;
  for (int n : {4, 8, 16, 32}) {
    CAPTURE(n);
    const auto f = figure_example3(n);
    const double l1 = d_L1(f, lim, 3.0);
    CHECK(l1 < prev);
    prev = l1;
    const double m1 = d_M1(f, lim, 3.0).distance;
    CHECK(m1 >= 0.2);
    CHECK(m1 <= d_M1_discrete(f, lim, 3.0).distance + 1e-9);
  }
}

TEST_CASE("right-continuous inverse") {
  const auto f = [] {
    StepPath p(0.0, 3.0);
    p.push_jump(1.0, 2.0);
    return p;
  }();
  const auto inv = right_cont_inverse(f, 3.0);
  CHECK(inv.at(0.0) == 1.0);
  CHECK(inv.at(1.99) == 1.0);
  CHECK(inv.at(2.0) == kPathSentinel);
  CHECK(invert(f, 3.0).jump_times == inv.jump_times);

  StepPath dec(1.0, 2.0);
  dec.push_jump(1.0, 0.0);
  CHECK_THROWS_AS(right_cont_inverse(dec, 1.0), std::invalid_argument);

  // brute-force scan oracle on a random non-decreasing path
  Rng rng(4);
  StepPath g(0.0, 10.0);
  double level = 0.0;
  for (int k = 1; k < 40; ++k) {
    level += (rng() % 3 == 0) ? 0.0 : unit_exponential(rng);
    g.push_jump(0.25 * k, level);
  }
  const auto ig = right_cont_inverse(g, level + 1.0);
  for (int q = 0; q < 1000; ++q) {
    const double t = (level + 1.0) * uniform_open(rng);
    double scan = kPathSentinel;
    for (double s = 0.0; s <= 10.0; s += 0.25)
      if (g.at(s) > t) {
        scan = s;
        break;
      }
    CHECK(ig.at(t) == scan);
  }
  // inverse of the inverse recovers g at continuity points
  StepPath finite(ig.initial_value, ig.horizon);
  for (std::size_t k = 0; k < ig.jump_count() && std::isfinite(ig.values[k]); ++k)
    finite.push_jump(ig.jump_times[k], ig.values[k]);
  const auto back = right_cont_inverse(finite, 9.9);
  for (double s = 0.1; s < 9.5; s += 0.25) CHECK(back.at(s) == Approx(g.at(s)));
}

TEST_CASE("first exceed time on a grid") {
  GridPath f{0.5, {0.0, 1.0, 1.0, 3.0}};
  CHECK(first_exceed_time(f, 0.5) == Approx(0.25));
  CHECK(first_exceed_time(f, 1.0) == Approx(1.0));
  CHECK(first_exceed_time(f, -1.0) == 0.0);
  CHECK(std::isinf(first_exceed_time(f, 3.0)));
}

TEST_CASE("composition") {
  GridPath outer{0.1, {}};
  for (int k = 0; k <= 30; ++k) outer.values.push_back(std::sin(0.1 * k));
  StepPath id(0.0, 3.0);
  for (int k = 1; k <= 30; ++k) id.push_jump(0.1 * k, 0.1 * k);
  const auto c = compose(outer, id);
  CHECK(c.jump_times == id.jump_times);
  for (std::size_t k = 0; k < c.jump_count(); ++k) CHECK(c.values[k] == Approx(outer.values[k + 1]));
  StepPath bad(0.0, 1.0);
  bad.push_jump(0.5, 4.0);
  CHECK_THROWS_AS(compose(outer, bad), std::domain_error);
}

TEST_CASE("grid to step conversion reports its error") {
  GridPath f{0.01, {}};
  for (int k = 0; k <= 100; ++k) f.values.push_back(2.0 * 0.01 * k);
  const auto s = to_step_path(f, 0.1);
  CHECK(s.error_bound == Approx(0.2));
  CHECK(d_sup(s.path, StepPath(0.0, 1.0), 1.0) <= 2.0);
  for (double t = 0.0; t < 1.0; t += 0.013) CHECK(std::fabs(s.path.at(t) - f.at(t)) <= s.error_bound + 1e-12);
}

TEST_CASE("csv round trip is exact") {
  Rng rng(12);
  const auto f = random_step_path(rng, 2.5, 20);
  std::stringstream ss;
  write_csv(ss, f);
  const auto g = read_csv(ss);
  CHECK(g.initial_value == f.initial_value);
  CHECK(g.jump_times == f.jump_times);
  CHECK(g.values == f.values);
  CHECK(g.horizon == f.horizon);
  std::stringstream bad("t,value\n0,abc\n");
  CHECK_THROWS(read_csv(bad));
}
