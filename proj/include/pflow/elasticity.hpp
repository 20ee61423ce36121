#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pflow/fem.hpp"
#include "pflow/flow.hpp"
#include "pflow/geometry.hpp"
#include "pflow/mesh.hpp"

namespace pflow {

/// Mixed displacement-traction problem on the solid mesh, plane strain:
/// sigma(u) = lambda (div u) I + mu (grad u + grad u^T), clamped on the
/// clamp-tagged boundary, nodal traction samples elsewhere.
struct ElasticityProblem {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const P2Space> space;
  double lambda = 1.0;
  double mu = 1.0;
  std::function<Vec2(Vec2)> volume_load;  // null means zero
  /// Traction samples per boundary edge, local order (a, b, midpoint); edge
  /// local storage keeps jumps at tag junctions representable.
  std::vector<std::array<Vec2, 3>> traction;
  std::function<Vec2(Vec2)> clamp_displacement;  // null means homogeneous
  double rel_tol = 1e-10;

  static ElasticityProblem create(std::shared_ptr<const Mesh> mesh,
                                  double lambda, double mu);
  /// Fills traction samples on all edges carrying `tag` from a pointwise law.
  void set_traction(BoundaryTag tag, const std::function<Vec2(Vec2)>& law);
  void validate() const;  // throws MissingClamp / ConfigError
};

struct ElasticitySolution {
  std::shared_ptr<const P2Space> space;
  Field displacement;  // 2 components
  Field stress;        // recovered nodal sigma: xx, yy, xy, zz (plane strain)
  Field grad_u;        // recovered nodal du_i/dx_j: xx, xy, yx, yy
  Field hess_u;        // recovered second derivatives:
                       // (ux,xx) (ux,xy) (ux,yy) (uy,xx) (uy,xy) (uy,yy)
  double lambda = 0.0;  // material constants used in the solve
  double mu = 0.0;
  double residual = 0.0;
  double strain_energy = 0.0;   // int 1/2 sigma : eps
  double external_work = 0.0;   // int f.u + boundary int g.u

  void export_csv(const std::string& path) const;
};

ElasticitySolution solve_elasticity(const ElasticityProblem& problem);

/// One-way coupled evaluation: fluid mesh -> flow solve -> Bernoulli pressure
/// -> traction transfer -> solid mesh -> elasticity solve.
struct CoupledConfig {
  double h_fluid = 0.08;
  double h_solid = 0.05;
  double corner_rounding = -1.0;        // <0: 2*h_fluid
  int boundary_resolution_factor = 1;   // multiplies the derived sampling
  double inflow_U = 1.0;
  double outflow_scale = 1.0;  // != 1 deliberately unbalances the data
  double density = 1.0;
  double stagnation_pressure = 1.0;
  Vec2 pin_point{0.0, 0.0};
  bool pin_default = true;  // derive the pin location from the shroud
  double lambda = 1.0;
  double mu = 1.0;
  Vec2 body_force{0.0, 0.0};
  double rel_tol = 1e-10;
};

struct CoupledSolution {
  BoundaryGeometry boundary;
  std::shared_ptr<const Mesh> fluid_mesh;
  std::shared_ptr<const Mesh> solid_mesh;
  FlowProblem flow_problem;
  FlowSolution flow;
  ElasticitySolution solid;
  /// Wetted chain of the solid mesh plus per-node data used by the
  /// objective functionals.
  BoundaryChain wetted_chain;
  std::vector<double> wetted_dist_le;
  std::vector<double> wetted_speed;
};

CoupledSolution coupled_solve(const Shape& shape, const CoupledConfig& config);

}  // namespace pflow
