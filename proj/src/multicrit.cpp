#include "pflow/multicrit.hpp"

#include <cmath>

#include "pflow/errors.hpp"

namespace pflow {

void DesignPool::push(EvaluatedDesign d) {
  d.objectives.check_finite();
  for (const auto& existing : designs)
    if (existing.coefficients == d.coefficients)
      throw Error(ErrorCode::ConfigError,
                  "duplicate shape coefficients in the design pool");
  designs.push_back(std::move(d));
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::LengthMismatch,
                "objective vectors differ in length");
  bool strict = false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.values[i] > b.values[i]) return false;
    if (a.values[i] < b.values[i]) strict = true;
  }
  return strict;
}

bool objective_tie(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a.values[i] - b.values[i]) > kObjectiveTieTol) return false;
  return true;
}

DesignPool nondominated_set(const DesignPool& pool) {
  if (pool.designs.empty())
    throw Error(ErrorCode::EmptyPool, "nondominated_set of an empty pool");
  DesignPool front;
  for (const auto& cand : pool.designs) {
    bool dominated = false;
    for (const auto& other : pool.designs) {
      if (&other == &cand) continue;
      // Objective-space ties are kept in the front, set-valued by intent.
      if (dominates(other.objectives, cand.objectives) &&
          !objective_tie(other.objectives, cand.objectives)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.designs.push_back(cand);
  }
  return front;
}

bool front_maximality_check(const DesignPool& pool) {
  if (pool.designs.empty()) return true;
  const DesignPool front = nondominated_set(pool);
  for (const auto& d : pool.designs) {
    bool dominated = false;
    for (const auto& other : pool.designs)
      if (&other != &d && dominates(other.objectives, d.objectives) &&
          !objective_tie(other.objectives, d.objectives)) {
        dominated = true;
        break;
      }
    if (!dominated) continue;
    bool covered = false;
    for (const auto& f : front.designs)
      if (dominates(f.objectives, d.objectives)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

}  // namespace pflow
