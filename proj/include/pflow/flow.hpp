#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pflow/fem.hpp"
#include "pflow/geometry.hpp"
#include "pflow/mesh.hpp"

namespace pflow {

/// Neumann problem for the flow potential on a fluid mesh: Laplace equation,
/// prescribed normal velocity g on inlet/outlet, zero flux on walls and the
/// component. g is stored nodally on the P2 boundary nodes and must satisfy
/// the discrete compatibility condition (integral zero).
struct FlowProblem {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const P2Space> space;
  /// g samples per boundary edge, local order (a, b, midpoint); all zero on
  /// edges that are not inlet/outlet. Edge-local storage keeps corner
  /// discontinuities of the normal trace representable.
  std::vector<std::array<double, 3>> g;
  Vec2 pin_point;  // x0 with phi(x0) = 0
  double density = 1.0;
  double stagnation_pressure = 1.0;
  double rel_tol = 1e-10;

  /// Builds edge-local data from a profile evaluated on inlet/outlet edges;
  /// the profile receives the sample position, the edge's outward unit
  /// normal and the edge tag.
  using Profile = std::function<double(Vec2, Vec2, BoundaryTag)>;
  static FlowProblem create(std::shared_ptr<const Mesh> mesh,
                            const Profile& profile, Vec2 pin_point,
                            double density, double stagnation_pressure);
  /// Constant -U on the inlet, +U * (inlet length / outlet length) on the
  /// outlet; compatible by construction.
  static FlowProblem uniform_inflow(std::shared_ptr<const Mesh> mesh, double U,
                                    Vec2 pin_point, double density,
                                    double stagnation_pressure);

  double g_integral() const;      // discrete boundary integral of g
  double g_abs_integral() const;  // scale for the compatibility test
  /// Throws IncompatibleData unless |int g| <= 1e-10 * max(1, int |g|).
  void check_compatibility() const;
  /// Removes the discrete compatibility defect by a constant shift of g on
  /// its inlet/outlet support (used with manufactured Neumann data).
  void project_compatible();
};

struct FlowSolution {
  std::shared_ptr<const P2Space> space;
  Field phi;       // scalar potential, phi(pin) = 0
  Field velocity;  // recovered nodal gradient, 2 components
  BoundaryChain component_chain;
  std::vector<double> boundary_speed;  // |v| per component-chain node
  double residual = 0.0;
  double dirichlet_energy = 0.0;  // 1/2 int |grad phi|^2

  double speed_at(const Vec2& p) const;
  void export_csv(const std::string& path) const;
};

/// Solves the discrete weak problem with quadratic elements. The pure-Neumann
/// kernel is removed by a mean-value Lagrange multiplier; the solution is then
/// shifted so that phi(pin_point) = 0.
FlowSolution solve_flow(const FlowProblem& problem);

/// Static pressure p_s = p_st - rho/2 |v|^2 sampled at the boundary-geometry
/// vertices; zero on the dry part of the boundary.
std::vector<double> static_pressure(const FlowSolution& solution,
                                    const FlowProblem& problem,
                                    const BoundaryGeometry& boundary);

/// Traction samples g_s = -p_s n per boundary-geometry vertex.
std::vector<Vec2> traction_from_pressure(const std::vector<double>& p_s,
                                         const BoundaryGeometry& boundary);

}  // namespace pflow
