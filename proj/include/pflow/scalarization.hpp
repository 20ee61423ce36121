#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pflow/multicrit.hpp"

namespace pflow {

enum class ScalMethod { WeightedSum, EpsilonConstraint };

/// Preference parameter theta with its method tag. For the weighted sum,
/// `theta` holds the weights; for the epsilon-constraint method `objective`
/// names the minimized index and `epsilons` bound the others (the entry at
/// `objective` is ignored).
struct ScalarizationSpec {
  ScalMethod method = ScalMethod::WeightedSum;
  std::vector<double> theta;
  int objective = 0;
  std::vector<double> epsilons;

  static ScalarizationSpec weighted_sum(std::vector<double> weights);
  static ScalarizationSpec epsilon_constraint(int objective,
                                              std::vector<double> epsilons);
};

/// S_theta(J); empty when the design is infeasible for the epsilon-constraint
/// subgraph G_eps (infeasibility is a value, not an error).
std::optional<double> scalarize(const ScalarizationSpec& spec,
                                const ObjectiveVector& objectives);

/// Argmin set of a scalarized problem: all designs within delta_tol of the
/// optimal value.
struct ArgminSet {
  std::vector<int> member_ids;
  std::vector<std::vector<double>> member_coefficients;
  double optimal_value = 0.0;
  double delta_tol = 0.0;
};

double argmin_delta_tol(double optimal_value);

/// Exhaustive pool minimization. Throws InfeasibleProblem when no pool member
/// is feasible.
ArgminSet solve_scalarized(const ScalarizationSpec& spec, const DesignPool& pool);

/// Derivative-free minimization over the coefficient box: deterministic
/// multi-start compass (pattern) search; the argmin set collects every
/// evaluated design within delta_tol of the best.
struct SearchConfig {
  std::vector<double> lower;  // coefficient box
  std::vector<double> upper;
  int starts_per_axis = 3;    // lattice of starting points
  double initial_step_fraction = 0.25;
  double min_step_fraction = 1e-3;
  int max_evaluations = 400;
};

using PipelineFn =
    std::function<std::optional<ObjectiveVector>(const std::vector<double>&)>;

ArgminSet solve_scalarized_search(const ScalarizationSpec& spec,
                                  const PipelineFn& pipeline,
                                  const SearchConfig& config);

/// Positive-weight sufficiency cross-check: every argmin member of a strictly
/// positive weighted sum must be nondominated in the pool.
bool argmin_is_pareto(const ScalarizationSpec& spec, const ArgminSet& argmin,
                      const DesignPool& pool);

/// One entry of the Hausdorff stability diagnostic: the one-sided deviation
/// sup_{x in argmin(theta_n)} inf_{x' in argmin(theta*)} d(x, x') between
/// optimal shape sets, measured on boundary point clouds, plus the
/// coefficient-space analogue.
struct StabilityPoint {
  std::vector<double> theta;
  double deviation = 0.0;        // shape point-cloud metric
  double coeff_deviation = 0.0;  // Euclidean metric on coefficients
  int argmin_size = 0;
};

using ShapeCloudFn =
    std::function<std::vector<Vec2>(const std::vector<double>&)>;

std::vector<StabilityPoint> stability_sweep(
    const std::vector<ScalarizationSpec>& sequence,
    const ScalarizationSpec& limit, const DesignPool& pool,
    const ShapeCloudFn& cloud);

/// tau(eps) and feasible-set nesting along a componentwise-decreasing chain
/// of epsilon vectors; infeasible steps are reported, not thrown.
struct EpsilonStep {
  std::vector<double> epsilons;
  std::optional<double> tau;
  int feasible_count = 0;
};

struct EpsilonReport {
  std::vector<EpsilonStep> steps;
  bool tau_monotone = true;   // tau weakly increases as eps decreases
  bool nested = true;         // feasible sets shrink along the chain
};

EpsilonReport epsilon_monotonicity(int objective,
                                   const std::vector<std::vector<double>>& chain,
                                   const DesignPool& pool);

}  // namespace pflow
