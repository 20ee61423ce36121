#include "pflow/scalarization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pflow/errors.hpp"
#include "pflow/geometry.hpp"

namespace pflow {

ScalarizationSpec ScalarizationSpec::weighted_sum(std::vector<double> weights) {
  ScalarizationSpec s;
  s.method = ScalMethod::WeightedSum;
  s.theta = std::move(weights);
  return s;
}

ScalarizationSpec ScalarizationSpec::epsilon_constraint(
    int objective, std::vector<double> epsilons) {
  ScalarizationSpec s;
  s.method = ScalMethod::EpsilonConstraint;
  s.objective = objective;
  s.epsilons = std::move(epsilons);
  return s;
}

std::optional<double> scalarize(const ScalarizationSpec& spec,
                                const ObjectiveVector& objectives) {
  if (spec.method == ScalMethod::WeightedSum) {
    if (static_cast<int>(spec.theta.size()) != objectives.size())
      throw Error(ErrorCode::LengthMismatch,
                  "weight vector does not match the objective count");
    double s = 0.0;
    for (int i = 0; i < objectives.size(); ++i)
      s += spec.theta[i] * objectives.values[i];
    return s;
  }
  if (spec.objective < 0 || spec.objective >= objectives.size())
    throw Error(ErrorCode::ConfigError, "epsilon-constraint index out of range");
  for (int i = 0; i < objectives.size(); ++i) {
    if (i == spec.objective) continue;
    if (i < static_cast<int>(spec.epsilons.size()) &&
        objectives.values[i] > spec.epsilons[i])
      return std::nullopt;  // outside the feasible subgraph
  }
  return objectives.values[spec.objective];
}

double argmin_delta_tol(double optimal_value) {
  return 1e-9 * std::abs(optimal_value) + 1e-12;
}

ArgminSet solve_scalarized(const ScalarizationSpec& spec,
                           const DesignPool& pool) {
  if (pool.designs.empty())
    throw Error(ErrorCode::EmptyPool, "scalarization over an empty pool");
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  std::vector<std::optional<double>> vals(pool.designs.size());
  for (std::size_t i = 0; i < pool.designs.size(); ++i) {
    vals[i] = scalarize(spec, pool.designs[i].objectives);
    if (vals[i]) {
      any = true;
      best = std::min(best, *vals[i]);
    }
  }
  if (!any)
    throw Error(ErrorCode::InfeasibleProblem,
                "no feasible design for the epsilon constraints");
  ArgminSet out;
  out.optimal_value = best;
  out.delta_tol = argmin_delta_tol(best);
  for (std::size_t i = 0; i < pool.designs.size(); ++i)
    if (vals[i] && *vals[i] <= best + out.delta_tol) {
      out.member_ids.push_back(pool.designs[i].id);
      out.member_coefficients.push_back(pool.designs[i].coefficients);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Pattern search

namespace {

struct EvalCache {
  std::map<std::vector<double>, std::optional<double>> seen;
  std::vector<std::pair<std::vector<double>, double>> feasible;  // coeffs, S
  int evaluations = 0;
};

std::optional<double> cached_eval(const ScalarizationSpec& spec,
                                  const PipelineFn& pipeline, EvalCache& cache,
                                  const std::vector<double>& c) {
  auto it = cache.seen.find(c);
  if (it != cache.seen.end()) return it->second;
  std::optional<double> s;
  const auto obj = pipeline(c);  // empty on invalid/unmeshable shapes
  if (obj) s = scalarize(spec, *obj);
  cache.seen[c] = s;
  ++cache.evaluations;
  if (s) cache.feasible.emplace_back(c, *s);
  return s;
}

}  // namespace

ArgminSet solve_scalarized_search(const ScalarizationSpec& spec,
                                  const PipelineFn& pipeline,
                                  const SearchConfig& config) {
  const int n = static_cast<int>(config.lower.size());
  if (n == 0 || config.upper.size() != config.lower.size())
    throw Error(ErrorCode::ConfigError, "search box is empty or inconsistent");

  // Deterministic lattice of starting points.
  std::vector<std::vector<double>> starts;
  const int spa = std::max(1, config.starts_per_axis);
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> c(n);
    for (int d = 0; d < n; ++d) {
      const double f = spa == 1 ? 0.5 : (idx[d] + 0.5) / spa;
      c[d] = config.lower[d] + f * (config.upper[d] - config.lower[d]);
    }
    starts.push_back(c);
    int d = 0;
    for (; d < n; ++d) {
      if (++idx[d] < spa) break;
      idx[d] = 0;
    }
    if (d == n) break;
    if (starts.size() > 256) break;  // lattice cap for high-dimensional boxes
  }

  EvalCache cache;
  for (const auto& start : starts) {
    if (cache.evaluations >= config.max_evaluations) break;
    std::vector<double> cur = start;
    auto cur_val = cached_eval(spec, pipeline, cache, cur);
    std::vector<double> step(n);
    for (int d = 0; d < n; ++d)
      step[d] = config.initial_step_fraction * (config.upper[d] - config.lower[d]);
    double frac = config.initial_step_fraction;
    while (frac > config.min_step_fraction &&
           cache.evaluations < config.max_evaluations) {
      bool improved = false;
      for (int d = 0; d < n && !improved; ++d) {
        for (const double sgn : {+1.0, -1.0}) {
          std::vector<double> cand = cur;
          cand[d] = std::clamp(cand[d] + sgn * step[d], config.lower[d],
                               config.upper[d]);
          if (cand[d] == cur[d]) continue;
          const auto v = cached_eval(spec, pipeline, cache, cand);
          if (v && (!cur_val || *v < *cur_val)) {
            cur = cand;
            cur_val = v;
            improved = true;
            break;
          }
          if (cache.evaluations >= config.max_evaluations) break;
        }
      }
      if (!improved) {
        frac *= 0.5;
        for (double& s : step) s *= 0.5;
      }
    }
  }

  if (cache.feasible.empty())
    throw Error(ErrorCode::InfeasibleProblem,
                "pattern search found no feasible design");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [c, v] : cache.feasible) best = std::min(best, v);
  ArgminSet out;
  out.optimal_value = best;
  out.delta_tol = argmin_delta_tol(best);
  int id = 0;
  for (const auto& [c, v] : cache.feasible) {
    if (v <= best + out.delta_tol) {
      out.member_ids.push_back(id);
      out.member_coefficients.push_back(c);
    }
    ++id;
  }
  return out;
}

bool argmin_is_pareto(const ScalarizationSpec& spec, const ArgminSet& argmin,
                      const DesignPool& pool) {
  if (spec.method != ScalMethod::WeightedSum)
    throw Error(ErrorCode::ConfigError,
                "positive-weight sufficiency applies to weighted sums");
  for (double w : spec.theta)
    if (!(w > 0.0))
      throw Error(ErrorCode::ConfigError,
                  "sufficiency check requires strictly positive weights");
  const DesignPool front = nondominated_set(pool);
  for (int id : argmin.member_ids) {
    bool found = false;
    for (const auto& f : front.designs)
      if (f.id == id) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

std::vector<StabilityPoint> stability_sweep(
    const std::vector<ScalarizationSpec>& sequence,
    const ScalarizationSpec& limit, const DesignPool& pool,
    const ShapeCloudFn& cloud) {
  const ArgminSet ref = solve_scalarized(limit, pool);
  std::vector<std::vector<Vec2>> ref_clouds;
  ref_clouds.reserve(ref.member_coefficients.size());
  for (const auto& c : ref.member_coefficients) ref_clouds.push_back(cloud(c));

  std::vector<StabilityPoint> out;
  for (const auto& spec : sequence) {
    StabilityPoint pt;
    pt.theta = spec.theta.empty() ? spec.epsilons : spec.theta;
    const ArgminSet cur = solve_scalarized(spec, pool);
    pt.argmin_size = static_cast<int>(cur.member_ids.size());
    double dev = 0.0, cdev = 0.0;
    for (std::size_t i = 0; i < cur.member_coefficients.size(); ++i) {
      const auto pc = cloud(cur.member_coefficients[i]);
      double inf_d = std::numeric_limits<double>::max();
      double inf_c = inf_d;
      for (std::size_t j = 0; j < ref_clouds.size(); ++j) {
        inf_d = std::min(inf_d, hausdorff_distance(pc, ref_clouds[j]));
        double s = 0.0;
        for (std::size_t k = 0; k < cur.member_coefficients[i].size(); ++k) {
          const double d =
              cur.member_coefficients[i][k] - ref.member_coefficients[j][k];
          s += d * d;
        }
        inf_c = std::min(inf_c, std::sqrt(s));
      }
      dev = std::max(dev, inf_d);
      cdev = std::max(cdev, inf_c);
    }
    pt.deviation = dev;
    pt.coeff_deviation = cdev;
    out.push_back(std::move(pt));
  }
  return out;
}

EpsilonReport epsilon_monotonicity(
    int objective, const std::vector<std::vector<double>>& chain,
    const DesignPool& pool) {
  EpsilonReport report;
  std::optional<double> prev_tau;
  std::vector<char> prev_feasible(pool.designs.size(), 1);
  for (std::size_t step = 0; step < chain.size(); ++step) {
    // Chain must decrease componentwise.
    if (step > 0)
      for (std::size_t i = 0; i < chain[step].size(); ++i)
        if (chain[step][i] > chain[step - 1][i] + 1e-15)
          throw Error(ErrorCode::ConfigError,
                      "epsilon chain must be componentwise nonincreasing");
    const auto spec =
        ScalarizationSpec::epsilon_constraint(objective, chain[step]);
    EpsilonStep es;
    es.epsilons = chain[step];
    std::vector<char> feasible(pool.designs.size(), 0);
    for (std::size_t i = 0; i < pool.designs.size(); ++i) {
      const auto v = scalarize(spec, pool.designs[i].objectives);
      if (v) {
        feasible[i] = 1;
        ++es.feasible_count;
        es.tau = es.tau ? std::min(*es.tau, *v) : *v;
      }
    }
    // Nesting G_eps subset of G_eps' for eps <= eps'.
    for (std::size_t i = 0; i < feasible.size(); ++i)
      if (feasible[i] && !prev_feasible[i]) report.nested = false;
    // tau weakly increases as the feasible set shrinks.
    if (es.tau && prev_tau && *es.tau < *prev_tau - 1e-12)
      report.tau_monotone = false;
    if (es.tau) prev_tau = es.tau;
    prev_feasible = feasible;
    report.steps.push_back(std::move(es));
  }
  return report;
}

}  // namespace pflow
