#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pflow/errors.hpp"
#include "pflow/scalarization.hpp"

using namespace pflow;

namespace {

ObjectiveVector obj(std::initializer_list<double> vals) {
  ObjectiveVector o;
  o.values = vals;
  o.labels.assign(o.values.size(), "J");
  return o;
}

DesignPool random_pool(std::mt19937_64& rng, int n, int l = 2) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  DesignPool pool;
  for (int i = 0; i < n; ++i) {
    EvaluatedDesign d;
    d.id = i;
    d.coefficients = {uni(rng), uni(rng)};
    for (int c = 0; c < l; ++c) d.objectives.values.push_back(uni(rng));
    d.objectives.labels.assign(l, "J");
    pool.designs.push_back(std::move(d));
  }
  return pool;
}

// Point clouds for the unit-square "shape" translated by the coefficients;
// Hausdorff distance between two such clouds equals the translation distance.
std::vector<Vec2> square_cloud(const std::vector<double>& c) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 4; ++i)
    pts.push_back(Vec2{(i & 1) ? 1.0 : 0.0, (i & 2) ? 1.0 : 0.0} +
                  Vec2{c[0], c.size() > 1 ? c[1] : 0.0});
  return pts;
}

}  // namespace

TEST_CASE("scalarize: weighted sums and epsilon feasibility") {
  CHECK(*scalarize(ScalarizationSpec::weighted_sum({1.0, 0.0}), obj({3, 7})) == 3.0);
  CHECK(*scalarize(ScalarizationSpec::weighted_sum({0.5, 0.5}), obj({2, 4})) == 3.0);
  // Minimize J_0, constrain J_1 <= 5; J = (2, 6) violates the constraint.
  const auto spec = ScalarizationSpec::epsilon_constraint(0, {0.0, 5.0});
  CHECK(!scalarize(spec, obj({2, 6})).has_value());
  CHECK(*scalarize(spec, obj({2, 4.5})) == 2.0);
  CHECK_THROWS_AS(scalarize(ScalarizationSpec::weighted_sum({1.0}), obj({1, 2})),
                  Error);
}

TEST_CASE("solve_scalarized equals exhaustive pool minimization") {
  std::mt19937_64 rng(42);
  const DesignPool pool = random_pool(rng, 100);
  for (auto weights : {std::vector<double>{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.7}}) {
    const auto spec = ScalarizationSpec::weighted_sum(weights);
    const ArgminSet a = solve_scalarized(spec, pool);
    // Exhaustive oracle.
    double best = 1e300;
    int best_id = -1;
    for (const auto& d : pool.designs) {
      const double v = *scalarize(spec, d.objectives);
      if (v < best) {
        best = v;
        best_id = d.id;
      }
    }
    REQUIRE(a.member_ids.size() == 1);
    CHECK(a.member_ids[0] == best_id);
    CHECK(a.optimal_value == best);
  }
}

TEST_CASE("vacuous epsilon constraint recovers the unconstrained minimum") {
  std::mt19937_64 rng(7);
  const DesignPool pool = random_pool(rng, 80);
  const auto vac = ScalarizationSpec::epsilon_constraint(0, {0.0, 100.0});
  const ArgminSet a = solve_scalarized(vac, pool);
  double best = 1e300;
  int best_id = -1;
  for (const auto& d : pool.designs)
    if (d.objectives.values[0] < best) {
      best = d.objectives.values[0];
      best_id = d.id;
    }
  REQUIRE(a.member_ids.size() == 1);
  CHECK(a.member_ids[0] == best_id);

  const auto binding = ScalarizationSpec::epsilon_constraint(0, {0.0, -1.0});
  CHECK_THROWS_AS(solve_scalarized(binding, pool), Error);
}

TEST_CASE("positive scaling of the weights leaves the argmin set unchanged") {
  std::mt19937_64 rng(12);
  const DesignPool pool = random_pool(rng, 150);
  const auto a =
      solve_scalarized(ScalarizationSpec::weighted_sum({0.4, 0.6}), pool);
  const auto b =
      solve_scalarized(ScalarizationSpec::weighted_sum({4.0, 6.0}), pool);
  CHECK(a.member_ids == b.member_ids);
}

TEST_CASE("strictly positive weighted sums return nondominated designs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> wuni(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const DesignPool pool = random_pool(rng, 40 + static_cast<int>(rng() % 60));
    const auto spec =
        ScalarizationSpec::weighted_sum({wuni(rng), wuni(rng)});
    const ArgminSet a = solve_scalarized(spec, pool);
    CHECK(argmin_is_pareto(spec, a, pool));
  }
}

TEST_CASE("argmin_is_pareto rejects zero weights") {
  std::mt19937_64 rng(3);
  const DesignPool pool = random_pool(rng, 10);
  const auto spec = ScalarizationSpec::weighted_sum({1.0, 0.0});
  const ArgminSet a = solve_scalarized(spec, pool);
  CHECK_THROWS_AS(argmin_is_pareto(spec, a, pool), Error);
}

TEST_CASE("stability sweep: constant preference gives zero deviation") {
  std::mt19937_64 rng(21);
  const DesignPool pool = random_pool(rng, 50);
  const auto star = ScalarizationSpec::weighted_sum({0.5, 0.5});
  const std::vector<ScalarizationSpec> seq(5, star);
  const auto sweep = stability_sweep(seq, star, pool, square_cloud);
  for (const auto& pt : sweep) {
    CHECK(pt.deviation == 0.0);
    CHECK(pt.coeff_deviation == 0.0);
  }
}

TEST_CASE("stability sweep reaches zero near a unique minimizer") {
  // Pool with a planted strict minimizer of the limit scalarization.
  std::mt19937_64 rng(31);
  DesignPool pool = random_pool(rng, 200);
  pool.designs[7].objectives = obj({0.01, 0.01});  // dominates everything
  const auto star = ScalarizationSpec::weighted_sum({0.7, 0.3});

  std::vector<ScalarizationSpec> seq;
  for (int n = 1; n <= 12; ++n) {
    const double t = 1.0 / n;
    seq.push_back(ScalarizationSpec::weighted_sum(
        {0.7 * (1.0 - t) + 0.2 * t, 0.3 * (1.0 - t) + 0.8 * t}));
  }
  const auto sweep = stability_sweep(seq, star, pool, square_cloud);
  CHECK(sweep.back().deviation == 0.0);
  for (const auto& pt : sweep) CHECK(pt.deviation >= 0.0);
  // Eventually nonincreasing tail.
  for (std::size_t i = sweep.size() - 3; i + 1 < sweep.size(); ++i)
    CHECK(sweep[i + 1].deviation <= sweep[i].deviation + 1e-15);
}

TEST_CASE("epsilon monotonicity: tau weakly increases along decreasing chains") {
  std::mt19937_64 rng(61);
  for (int seed = 0; seed < 50; ++seed) {
    const DesignPool pool = random_pool(rng, 60);
    // Decreasing 10-step chain on the constrained objective J_1.
    std::vector<std::vector<double>> chain;
    double eps = 1.05;
    for (int i = 0; i < 10; ++i) {
      chain.push_back({0.0, eps});
      eps -= 0.1;
    }
    const auto rep = epsilon_monotonicity(0, chain, pool);
    CHECK(rep.tau_monotone);
    CHECK(rep.nested);
    // Vacuous first step: everything feasible.
    CHECK(rep.steps.front().feasible_count == pool.size());
  }
}

TEST_CASE("epsilon monotonicity reports infeasible steps without aborting") {
  std::mt19937_64 rng(8);
  const DesignPool pool = random_pool(rng, 30);
  std::vector<std::vector<double>> chain{{0.0, 2.0}, {0.0, -1.0}};
  const auto rep = epsilon_monotonicity(0, chain, pool);
  REQUIRE(rep.steps.size() == 2);
  CHECK(rep.steps[0].tau.has_value());
  CHECK(!rep.steps[1].tau.has_value());
  CHECK(rep.steps[1].feasible_count == 0);
}

TEST_CASE("pattern search minimizes a smooth pool objective") {
  // Analytic pipeline: J = (|c - a|^2, |c - b|^2); the weighted sum has a
  // unique interior minimizer on the segment between a and b.
  const std::vector<double> a{0.2, -0.1}, b{-0.3, 0.25};
  PipelineFn pipeline = [&](const std::vector<double>& c) {
    ObjectiveVector o;
    const double da = std::hypot(c[0] - a[0], c[1] - a[1]);
    const double db = std::hypot(c[0] - b[0], c[1] - b[1]);
    o.values = {da * da, db * db};
    o.labels = {"J0", "J1"};
    return std::optional<ObjectiveVector>(o);
  };
  SearchConfig sc;
  sc.lower = {-0.5, -0.5};
  sc.upper = {0.5, 0.5};
  sc.max_evaluations = 2000;
  sc.min_step_fraction = 1e-4;
  const auto spec = ScalarizationSpec::weighted_sum({0.5, 0.5});
  const ArgminSet got = solve_scalarized_search(spec, pipeline, sc);
  // Analytic optimum: the midpoint of a and b.
  const double mx = 0.5 * (a[0] + b[0]), my = 0.5 * (a[1] + b[1]);
  REQUIRE(!got.member_coefficients.empty());
  const auto& c = got.member_coefficients.front();
  CHECK(std::abs(c[0] - mx) < 5e-3);
  CHECK(std::abs(c[1] - my) < 5e-3);
}
