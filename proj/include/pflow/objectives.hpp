#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pflow/elasticity.hpp"
#include "pflow/fem.hpp"
#include "pflow/flow.hpp"
#include "pflow/geometry.hpp"

namespace pflow {

struct FluidLossModel {
  double dynamic_viscosity = 1.0;   // mu_f (renamed: mu is a Lame constant)
  double kinematic_viscosity = 1.0; // nu
};

/// Coffin-Manson-Basquin parameters of the default deterministic life rule.
struct CmbParams {
  double sigma_f = 1000.0;  // fatigue strength coefficient sigma_f'
  double basquin_b = -0.09;
  double eps_f = 0.5;       // fatigue ductility coefficient eps_f'
  double coffin_c = -0.56;
  double youngs_e = 2.0e5;
  double delta_ns = 0.1;    // notch support reference length
};

struct ReliabilityModel {
  double weibull_m = 2.0;
  double cycles = 1.0e3;  // t in PoF(t)
  CmbParams cmb;
  /// Optional replacement rule N_det(sigma_v, |grad sigma_v|).
  std::function<double(double, double)> life_rule;

  double sigma_floor() const { return 1e-12 * cmb.youngs_e; }
  static constexpr double kNMax = 1e12;
  static constexpr double kNMin = 0.25;
};

struct StressTensor {
  double xx = 0.0, yy = 0.0, xy = 0.0, zz = 0.0;
};
struct StressTensorGrad {
  StressTensor ddx, ddy;
};

double von_mises(const StressTensor& s);

/// Blasius-type local wall shear stress
///   tau_w = 0.322 mu_f |v|^(3/2) / sqrt(nu dist_LE).
/// dist_le must already carry the leading-edge clamp.
double wall_shear(double speed, double dist_le, const FluidLossModel& model);

/// Nodal speeds and raw leading-edge distances along the component chain,
/// the data the friction integrand is built from.
struct WettedProfile {
  std::vector<double> speed;
  std::vector<double> dist_le;  // unclamped
  double dist_floor = 0.0;
};
WettedProfile wetted_profile(const FlowSolution& flow,
                             const BoundaryGeometry& boundary);

/// Friction power loss J_E: composite 3-point Gauss quadrature of |v| tau_w
/// over the wetted component boundary. Speeds and distances are interpolated
/// to the quadrature points, where the clamped integrand stays finite.
double friction_loss(const FlowSolution& flow, const BoundaryGeometry& boundary,
                     const FluidLossModel& model, int quadrature_panels = 1);

/// Deterministic life at one surface point. Default rule: von Mises stress
/// plus a gradient-based notch support factor feed a Coffin-Manson-Basquin
/// inversion (bisection on log N, 1e-10 relative). Unloaded points cap at
/// 1e12 cycles.
double deterministic_life(const StressTensor& stress,
                          const StressTensorGrad& stress_grad,
                          const ReliabilityModel& model);

struct ReliabilityResult {
  double j_r = 0.0;
  double pof = 0.0;
};

/// J_R = boundary integral of N_det^(-m) over the wetted boundary and the
/// probability of failure PoF(t) = 1 - exp(-t^m J_R).
ReliabilityResult reliability_functional(const ElasticitySolution& solid,
                                         const BoundaryGeometry& boundary,
                                         const ReliabilityModel& model,
                                         int quadrature_panels = 1);

double pof_from_jr(double j_r, double t, double m);

/// Stress tensor and its gradient at a node of the solid solution, from the
/// recovered first and second displacement derivatives.
StressTensor stress_at_node(const ElasticitySolution& solid, int node);
StressTensorGrad stress_grad_at_node(const ElasticitySolution& solid, int node,
                                     double lambda, double mu);

/// Raw arc-length distance to the leading edge of a point on (or near) the
/// discretized boundary, folded to the shorter way around.
double boundary_dist_le(const BoundaryGeometry& bg, const Vec2& p);

/// One surface quadrature point of the generic functional: chain edge index,
/// local coordinate on the edge and physical position.
struct SurfacePoint {
  int edge = 0;
  double xi = 0.0;
  Vec2 x;
};

/// Generic local cost functional: volume integral (3-point rule per triangle)
/// plus surface integral (3-point Gauss per boundary segment of a chain, the
/// integrand evaluated at the quadrature points). Either part may be absent.
double local_cost_functional(const Mesh* volume_mesh,
                             const std::function<double(Vec2)>& f_vol,
                             const P2Space* surface_space,
                             const BoundaryChain* chain,
                             const std::function<double(const SurfacePoint&)>& f_sur);

struct ObjectiveVector {
  std::vector<double> values;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(values.size()); }
  void check_finite() const;  // throws ConfigError on NaN/inf
};

}  // namespace pflow
