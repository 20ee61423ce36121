#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pflow/elasticity.hpp"
#include "pflow/geometry.hpp"
#include "pflow/objectives.hpp"
#include "pflow/scalarization.hpp"

namespace pflow {

struct PoolConfig {
  enum class Mode { Single, Grid, Random } mode = Mode::Single;
  std::vector<double> coefficients;  // single mode
  int grid_per_axis = 5;             // grid over the first two modes
  double coeff_bound = 0.05;
  int count = 25;  // random mode
  unsigned long long seed = 42;
  int max_retries = 200;
};

struct ScalarizationConfig {
  ScalMethod method = ScalMethod::WeightedSum;
  bool pool_mode = true;
  std::vector<std::vector<double>> thetas;
  std::vector<double> theta_star;
  int objective = 0;
  std::vector<std::vector<double>> epsilon_chain;
  SearchConfig search;
};

/// One configuration file drives every command; sections: geometry, mesh,
/// flow, elasticity, reliability, fluidloss, pool, scalarization.
struct RunConfig {
  std::shared_ptr<const ShapeSpaceConfig> shape_space;
  CoupledConfig coupled;
  ReliabilityModel reliability;
  FluidLossModel fluidloss;
  PoolConfig pool;
  ScalarizationConfig scalarization;
  int boundary_resolution = 0;  // 0: derived from the mesh size
  std::string canonical;        // resolved config dump, hashed into manifests
};

/// Parses and validates a JSON configuration file. Throws ConfigError with
/// file/field diagnostics.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin);

}  // namespace pflow
