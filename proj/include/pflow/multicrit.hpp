#pragma once

#include <string>
#include <vector>

#include "pflow/objectives.hpp"

namespace pflow {

/// One evaluated design: a coefficient vector with its objective values and
/// the solver settings that produced them.
struct EvaluatedDesign {
  int id = 0;
  std::vector<double> coefficients;
  ObjectiveVector objectives;
  struct Provenance {
    double h_fluid = 0.0;
    double h_solid = 0.0;
    double rel_tol = 0.0;
  } provenance;
};

struct DesignPool {
  std::vector<EvaluatedDesign> designs;

  int size() const { return static_cast<int>(designs.size()); }
  /// Throws ConfigError on duplicate coefficient vectors.
  void push(EvaluatedDesign d);
};

/// Strict Pareto dominance for minimization: a_i <= b_i everywhere and
/// a_i < b_i somewhere. Throws LengthMismatch on unequal lengths.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

inline constexpr double kObjectiveTieTol = 1e-12;

/// True when the two vectors coincide within the tie tolerance.
bool objective_tie(const ObjectiveVector& a, const ObjectiveVector& b);

/// The nondominated subset (finite Pareto front). Floating-point duplicates
/// within the tie tolerance are all retained. Throws EmptyPool.
DesignPool nondominated_set(const DesignPool& pool);

/// Finite-scale front maximality: every dominated pool member is dominated by
/// at least one member of the nondominated set.
bool front_maximality_check(const DesignPool& pool);

}  // namespace pflow
