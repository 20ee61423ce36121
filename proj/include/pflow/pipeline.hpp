#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pflow/config.hpp"
#include "pflow/multicrit.hpp"

namespace pflow {

inline constexpr const char* kToolVersion = "0.1.0";

struct EvaluationRecord {
  EvaluatedDesign design;  // objectives: (J_E, J_R)
  double pof = 0.0;
};

/// Full physics pipeline for one coefficient vector: realize -> mesh ->
/// flow -> pressure coupling -> elasticity -> objectives.
EvaluationRecord evaluate_design(const RunConfig& config,
                                 const std::vector<double>& coefficients,
                                 int id);

/// Coefficient vectors for the configured pool (single / grid / random).
/// Random sampling retries coefficient draws whose shapes fail admissibility.
std::vector<std::vector<double>> generate_pool_coefficients(
    const RunConfig& config, unsigned long long seed_override = 0);

/// Evaluates a set of designs, optionally on a small thread pool; results are
/// ordered by id regardless of completion order. Designs whose evaluation
/// fails are reported with context.
std::vector<EvaluationRecord> evaluate_pool(
    const RunConfig& config, const std::vector<std::vector<double>>& coeffs,
    int workers);

/// Objective evaluation as a PipelineFn for the pattern search; invalid
/// shapes yield an empty optional instead of an error.
std::optional<ObjectiveVector> try_evaluate(const RunConfig& config,
                                            const std::vector<double>& coeffs);

// --- result persistence ----------------------------------------------------

struct Manifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string created;  // ISO timestamp; not echoed into CSV bodies
  double h_fluid = 0.0, h_solid = 0.0, rel_tol = 0.0;
  std::vector<std::string> outputs;

  void write(const std::string& path) const;
};

Manifest make_manifest(const RunConfig& config);

std::string csv_header_comment(const Manifest& m);
std::string format_double(double v);

void write_objectives_csv(const std::string& path, const Manifest& m,
                          const std::vector<EvaluationRecord>& records);
void write_front_csv(const std::string& path, const Manifest& m,
                     const DesignPool& pool, const DesignPool& front);

int env_workers_default();

}  // namespace pflow
