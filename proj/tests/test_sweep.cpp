#include "doctest.h"

#include <algorithm>
#include <random>

#include "fairfront/error.hpp"
#include "fairfront/sweep.hpp"
#include "support/oracles.hpp"

using namespace fairfront;

namespace {

const DMUtilitySpec kLending = LendingUtility{0.1};
const DSUtilitySpec kCaseStudyDs{{10.0, -5.0, -1.0, 0.0}, {}, false};

SweepResult cloud(const std::vector<std::pair<double, double>>& points) {
  SweepResult r;
  r.groups = {"A", "B"};
  const double t[2] = {0.0, 0.0};
  const double u[2] = {0.0, 0.0};
  for (const auto& [x, y] : points) r.append(t, x, y, u);
  return r;
}

std::vector<std::uint8_t> flags_of(const std::vector<std::pair<double, double>>& points) {
  return pareto_front(cloud(points)).on_front;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("threshold grids") {
  const std::vector<double> g = linspace(0.0, 1.0, 101);
  REQUIRE(g.size() == 101);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[50] == 0.5);
  CHECK(std::is_sorted(g.begin(), g.end()));

  const Dataset ds = testing::fixture4();
  CHECK(threshold_grid(ds).combinations() == 10201);
  CHECK(threshold_grid(ds, 3, 0.0, 1.01).per_group[1] == std::vector<double>{0.0, 0.505, 1.01});

  CHECK(code_of([&] { threshold_grid(ds, 1); }) == ErrorCode::InvalidRange);
  CHECK(code_of([&] { threshold_grid(ds, 5, 0.5, 0.5); }) == ErrorCode::InvalidRange);
  CHECK(code_of([&] { threshold_grid(ds, 5, 0.0, 1.2); }) == ErrorCode::InvalidRange);
  CHECK(code_of([&] { custom_grid(ds, {{"F", {0.5}}}); }) == ErrorCode::MissingGroupThreshold);
  CHECK(code_of([&] { custom_grid(ds, {{"F", {0.5, 0.4}}, {"M", {0.1}}}); }) ==
        ErrorCode::InvalidRange);
  CHECK(code_of([&] { custom_grid(ds, {{"F", {}}, {"M", {0.1}}}); }) == ErrorCode::InvalidRange);
}

TEST_CASE("default sweep size and singleton grids") {
  const Dataset ds = testing::fixture4();
  const SweepResult full = sweep(ds, threshold_grid(ds), kLending, kCaseStudyDs, AllClaims{}, Maximin{},
                                 EvaluationMode::Expected);
  CHECK(full.size() == 10201);
  // Lexicographic: first group slowest.
  CHECK(full.thresholds_of(1)[0] == 0.0);
  CHECK(full.thresholds_of(1)[1] == 0.01);
  CHECK(full.thresholds_of(101)[0] == 0.01);

  const SweepResult one = sweep(ds, custom_grid(ds, {{"F", {0.5}}, {"M", {0.7}}}), kLending,
                                kCaseStudyDs, AllClaims{}, Maximin{}, EvaluationMode::Expected);
  REQUIRE(one.size() == 1);
  CHECK(pareto_front(one).on_front == std::vector<std::uint8_t>{1});
}

TEST_CASE("fixture sweep matches single-rule evaluation") {
  const Dataset ds = testing::fixture4();
  const std::vector<double> grid{0.0, 0.8, 1.01};
  const ThresholdGrid tg = custom_grid(ds, {{"F", grid}, {"M", grid}});
  for (auto mode : {EvaluationMode::Expected, EvaluationMode::Empirical}) {
    const SweepResult r =
        sweep(ds, tg, kLending, kCaseStudyDs, OutcomeEquals{1}, Maximin{}, mode);
    REQUIRE(r.size() == 9);
    std::size_t i = 0;
    for (double tf : grid) {
      for (double tm : grid) {
        const GroupRule rule{{{"F", tf}, {"M", tm}}};
        const DecisionVector d = apply_rule(ds, rule);
        const PositionUtilities pos = position_utilities(ds, d, kCaseStudyDs, OutcomeEquals{1}, mode);
        CHECK(r.thresholds_of(i)[0] == tf);
        CHECK(r.thresholds_of(i)[1] == tm);
        CHECK(r.dm_utility[i] == dm_utility_total(ds, d, kLending, mode));
        CHECK(r.fairness_score[i] == fairness_score(pos, Maximin{}));
        CHECK(r.utilities_of(i)[0] == pos.utilities[0]);
        CHECK(r.utilities_of(i)[1] == pos.utilities[1]);
        ++i;
      }
    }
  }

  // Empirical, F=0.8 and M=0.8: a, c accepted -> F {10, -1}, M {10}.
  const SweepResult r = sweep(ds, tg, kLending, kCaseStudyDs, OutcomeEquals{1}, Maximin{},
                              EvaluationMode::Empirical);
  CHECK(r.utilities_of(4)[0] == 4.5);
  CHECK(r.utilities_of(4)[1] == 10.0);
  CHECK(r.fairness_score[4] == 4.5);
}

TEST_CASE("pareto_front examples") {
  CHECK(flags_of({{1, 5}, {2, 4}, {3, 3}, {1, 1}}) == std::vector<std::uint8_t>{1, 1, 1, 0});
  CHECK(flags_of({{2, 2}, {2, 2}, {1, 1}}) == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(flags_of({{2, 0}, {2, 1}}) == std::vector<std::uint8_t>{0, 1});
  CHECK(flags_of({{-1, -1}}) == std::vector<std::uint8_t>{1});
  CHECK(code_of([] { pareto_front(SweepResult{}); }) == ErrorCode::EmptySweep);
}

TEST_CASE("pareto_flags agrees with the quadratic oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 300;
    const int levels = 2 + static_cast<int>(rng() % 20);
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = static_cast<double>(rng() % levels) - levels / 2;
      y[i] = static_cast<double>(rng() % levels) * 0.5;
    }
    const auto fast = pareto_flags(x, y);
    CHECK(fast == testing::brute_force_front(x, y));
    CHECK(std::any_of(fast.begin(), fast.end(), [](auto f) { return f == 1; }));
    // No front point dominates another.
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m && fast[a]; ++b) {
        if (!fast[b]) continue;
        CHECK_FALSE((x[a] >= x[b] && y[a] >= y[b] && (x[a] > x[b] || y[a] > y[b])));
      }
    }
  }
}

TEST_CASE("viability and extremes") {
  SweepResult r = pareto_front(cloud({{-1.0, 9.0}, {0.0, 5.0}, {3.0, 1.0}, {3.0, 0.5}}));
  r = filter_viable(r);
  CHECK(r.viable == std::vector<std::uint8_t>{0, 1, 1, 1});
  CHECK(filter_viable(r, -1e300).viable == std::vector<std::uint8_t>{1, 1, 1, 1});
  CHECK(filter_viable(r, 5.0).viable == std::vector<std::uint8_t>{0, 0, 0, 0});

  const auto [best_dm, best_fair] = extreme_indices(r);
  CHECK(best_dm == 2);
  CHECK(best_fair == 0);
  CHECK(front_path(r) == std::vector<std::size_t>{2, 1, 0});

  // Ties on the primary coordinate go to the larger other coordinate.
  const SweepResult tie = pareto_front(cloud({{2.0, 0.0}, {2.0, 1.0}}));
  CHECK(extreme_indices(tie).first == 1);
  // Exact duplicates go to the earlier rule.
  const SweepResult dup = pareto_front(cloud({{1.0, 1.0}, {1.0, 1.0}}));
  CHECK(extreme_indices(dup) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(front_path(dup) == std::vector<std::size_t>{0, 1});

  CHECK(code_of([] { extreme_indices(SweepResult{}); }) == ErrorCode::EmptySweep);
}

TEST_CASE("fairest rule with the best dm utility is on the front") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset ds = testing::synthetic_dataset({.size = 150, .groups = 2, .seed = seed});
    const SweepResult r =
        pareto_front(sweep(ds, threshold_grid(ds, 21), kLending, kCaseStudyDs, OutcomeEquals{1},
                           Maximin{}, EvaluationMode::Expected));
    const double best =
        *std::max_element(r.fairness_score.begin(), r.fairness_score.end());
    double best_dm = -INFINITY;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.fairness_score[i] == best) best_dm = std::max(best_dm, r.dm_utility[i]);
    }
    bool found = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.fairness_score[i] == best && r.dm_utility[i] == best_dm) {
        CHECK(r.on_front[i] == 1);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("front of a sub-grid is dominated by the full front") {
  const Dataset ds = testing::synthetic_dataset({.size = 100, .groups = 2, .seed = 4});
  const ThresholdGrid coarse = threshold_grid(ds, 6);
  const ThresholdGrid fine = threshold_grid(ds, 11);  // contains every coarse value
  const SweepResult small = pareto_front(
      sweep(ds, coarse, kLending, kCaseStudyDs, AllClaims{}, Egalitarian{}, EvaluationMode::Expected));
  const SweepResult big = pareto_front(
      sweep(ds, fine, kLending, kCaseStudyDs, AllClaims{}, Egalitarian{}, EvaluationMode::Expected));
  for (std::size_t a = 0; a < small.size(); ++a) {
    if (!small.on_front[a]) continue;
    bool covered = false;
    for (std::size_t b = 0; b < big.size() && !covered; ++b) {
      covered = big.on_front[b] && big.dm_utility[b] >= small.dm_utility[a] &&
                big.fairness_score[b] >= small.fairness_score[a];
    }
    CHECK(covered);
  }
}

TEST_CASE("sweep output does not depend on the thread count") {
  const Dataset ds = testing::synthetic_dataset({.size = 300, .groups = 3, .seed = 8});
  const ThresholdGrid grid = threshold_grid(ds, 15);
  const PatternOfJustice pattern = Prioritarian{{3.0, 2.0, 1.0}};
  SweepOptions one;
  one.threads = 1;
  const SweepResult base =
      sweep(ds, grid, kLending, kCaseStudyDs, OutcomeEquals{1}, pattern, EvaluationMode::Expected, one);
  for (unsigned threads : {2u, 3u, 8u}) {
    SweepOptions opts;
    opts.threads = threads;
    std::atomic<std::size_t> progress{0};
    opts.progress = &progress;
    const SweepResult r =
        sweep(ds, grid, kLending, kCaseStudyDs, OutcomeEquals{1}, pattern, EvaluationMode::Expected, opts);
    CHECK(r.thresholds == base.thresholds);
    CHECK(r.dm_utility == base.dm_utility);
    CHECK(r.fairness_score == base.fairness_score);
    CHECK(r.group_utilities == base.group_utilities);
    CHECK(progress.load() == r.size());
  }
}

TEST_CASE("uniform break-even rule maximizes dm utility among uniform rules") {
  const Dataset ds = testing::synthetic_dataset({.size = 400, .groups = 2, .seed = 12});
  const double p_star = optimal_uniform_threshold(kLending);
  const double at_star =
      dm_utility_total(ds, apply_rule(ds, UniformRule{p_star}), kLending, EvaluationMode::Expected);
  for (double t : linspace(0.0, 1.0, 101)) {
    const double u =
        dm_utility_total(ds, apply_rule(ds, UniformRule{t}), kLending, EvaluationMode::Expected);
    CHECK(u <= at_star + 1e-9);
  }
}

TEST_CASE("sweep errors") {
  const Dataset ds = testing::fixture4();
  SweepOptions opts;
  opts.cap = 100;
  CHECK(code_of([&] {
          sweep(ds, threshold_grid(ds), kLending, kCaseStudyDs, AllClaims{}, Maximin{},
                EvaluationMode::Expected, opts);
        }) == ErrorCode::SweepTooLarge);
  CHECK(code_of([&] {
          sweep(ds, threshold_grid(ds, 3), kLending, kCaseStudyDs, OutcomeEquals{0}, Maximin{},
                EvaluationMode::Expected);
        }) == ErrorCode::EmptyPosition);
  CHECK(code_of([&] {
          sweep(ds, threshold_grid(ds, 3), kLending, kCaseStudyDs, AllClaims{},
                Prioritarian{{1.0, 1.0, 1.0}}, EvaluationMode::Expected);
        }) == ErrorCode::WeightLengthMismatch);
}
