#include "pflow/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pflow/errors.hpp"

namespace pflow {

double von_mises(const StressTensor& s) {
  return std::sqrt(0.5 * ((s.xx - s.yy) * (s.xx - s.yy) +
                          (s.yy - s.zz) * (s.yy - s.zz) +
                          (s.zz - s.xx) * (s.zz - s.xx)) +
                   3.0 * s.xy * s.xy);
}

double wall_shear(double speed, double dist_le, const FluidLossModel& model) {
  return 0.322 * model.dynamic_viscosity * std::pow(speed, 1.5) /
         std::sqrt(model.kinematic_viscosity * dist_le);
}

double boundary_dist_le(const BoundaryGeometry& bg, const Vec2& p) {
  // Project onto the boundary polyline and interpolate the cumulative arc.
  const int n = bg.size();
  double best_d = std::numeric_limits<double>::max();
  double best_arc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = bg.vertices[i];
    const Vec2 b = bg.vertices[(i + 1) % n];
    const double len2 = (b - a).squared_norm();
    const double w =
        len2 > 0.0 ? std::clamp((p - a).dot(b - a) / len2, 0.0, 1.0) : 0.0;
    const Vec2 proj = a + (b - a) * w;
    const double d = (proj - p).squared_norm();
    if (d < best_d) {
      best_d = d;
      const double s0 = bg.cumulative_arclength[i];
      const double s1 = (i + 1 < n) ? bg.cumulative_arclength[i + 1]
                                    : bg.perimeter;
      best_arc = s0 + (s1 - s0) * w;
    }
  }
  return std::min(best_arc, bg.perimeter - best_arc);
}

WettedProfile wetted_profile(const FlowSolution& flow,
                             const BoundaryGeometry& boundary) {
  const BoundaryChain& chain = flow.component_chain;
  WettedProfile wp;
  wp.dist_floor = boundary.dist_le_floor();
  wp.speed = flow.boundary_speed;
  wp.dist_le.resize(chain.n_nodes());
  for (int i = 0; i < chain.n_nodes(); ++i)
    wp.dist_le[i] =
        boundary_dist_le(boundary, flow.space->nodes[chain.nodes[i]]);
  return wp;
}

double friction_loss(const FlowSolution& flow, const BoundaryGeometry& boundary,
                     const FluidLossModel& model, int quadrature_panels) {
  const BoundaryChain& chain = flow.component_chain;
  if (chain.n_nodes() == 0) return 0.0;
  const WettedProfile wp = wetted_profile(flow, boundary);
  return surface_quadrature(
      *flow.space, chain,
      [&](int edge, double xi, Vec2) {
        const double speed =
            std::max(chain_value_at(chain, wp.speed, edge, xi), 0.0);
        const double d = std::max(chain_value_at(chain, wp.dist_le, edge, xi),
                                  wp.dist_floor);
        return speed * wall_shear(speed, d, model);
      },
      quadrature_panels);
}

namespace {

double cmb_strain(double y, const CmbParams& p) {
  // y = log(2N); strain amplitude of the Coffin-Manson-Basquin law.
  return p.sigma_f / p.youngs_e * std::exp(p.basquin_b * y) +
         p.eps_f * std::exp(p.coffin_c * y);
}

}  // namespace

double deterministic_life(const StressTensor& stress,
                          const StressTensorGrad& stress_grad,
                          const ReliabilityModel& model) {
  const double floor = model.sigma_floor();
  const double sv = von_mises(stress);

  // Gradient of the von Mises stress by the chain rule through J = sigma_v^2.
  auto dJ = [&](const StressTensor& d) {
    return (2.0 * stress.xx - stress.yy - stress.zz) * d.xx +
           (2.0 * stress.yy - stress.xx - stress.zz) * d.yy +
           (2.0 * stress.zz - stress.xx - stress.yy) * d.zz +
           6.0 * stress.xy * d.xy;
  };
  const double denom = 2.0 * std::max(sv, floor);
  const double gx = dJ(stress_grad.ddx) / denom;
  const double gy = dJ(stress_grad.ddy) / denom;
  const double grad_sv = std::hypot(gx, gy);

  if (model.life_rule) return model.life_rule(sv, grad_sv);

  const CmbParams& p = model.cmb;
  if (!(p.youngs_e > 0.0) || p.basquin_b >= 0.0 || p.coffin_c >= 0.0 ||
      (p.sigma_f <= 0.0 && p.eps_f <= 0.0))
    throw Error(ErrorCode::NonConvergence,
                "life rule parameters do not define a decreasing strain-life curve");

  const double chi = grad_sv / std::max(sv, floor);
  const double n_chi = 1.0 + std::sqrt(chi * p.delta_ns);
  const double eps_a = sv / (n_chi * p.youngs_e);

  double lo = std::log(2.0 * ReliabilityModel::kNMin);
  double hi = std::log(2.0 * ReliabilityModel::kNMax);
  if (eps_a <= cmb_strain(hi, p)) return ReliabilityModel::kNMax;
  if (eps_a >= cmb_strain(lo, p)) return ReliabilityModel::kNMin;
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cmb_strain(mid, p) > eps_a)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * std::exp(0.5 * (lo + hi));
}

double pof_from_jr(double j_r, double t, double m) {
  return -std::expm1(-std::pow(t, m) * j_r);
}

StressTensor stress_at_node(const ElasticitySolution& solid, int node) {
  StressTensor s;
  s.xx = solid.stress.value(node, 0);
  s.yy = solid.stress.value(node, 1);
  s.xy = solid.stress.value(node, 2);
  s.zz = solid.stress.value(node, 3);
  return s;
}

StressTensorGrad stress_grad_at_node(const ElasticitySolution& solid, int node,
                                     double lambda, double mu) {
  // Hessian components: (ux,xx)(ux,xy)(ux,yy)(uy,xx)(uy,xy)(uy,yy).
  const double h[6] = {solid.hess_u.value(node, 0), solid.hess_u.value(node, 1),
                       solid.hess_u.value(node, 2), solid.hess_u.value(node, 3),
                       solid.hess_u.value(node, 4), solid.hess_u.value(node, 5)};
  const double div_x = h[0] + h[4];
  const double div_y = h[1] + h[5];
  const double exx_x = h[0], exx_y = h[1];
  const double eyy_x = h[4], eyy_y = h[5];
  const double exy_x = 0.5 * (h[1] + h[3]);
  const double exy_y = 0.5 * (h[2] + h[4]);

  StressTensorGrad g;
  g.ddx.xx = lambda * div_x + 2.0 * mu * exx_x;
  g.ddx.yy = lambda * div_x + 2.0 * mu * eyy_x;
  g.ddx.xy = 2.0 * mu * exy_x;
  g.ddx.zz = lambda * div_x;
  g.ddy.xx = lambda * div_y + 2.0 * mu * exx_y;
  g.ddy.yy = lambda * div_y + 2.0 * mu * eyy_y;
  g.ddy.xy = 2.0 * mu * exy_y;
  g.ddy.zz = lambda * div_y;
  return g;
}

ReliabilityResult reliability_functional(const ElasticitySolution& solid,
                                         const BoundaryGeometry& boundary,
                                         const ReliabilityModel& model,
                                         int quadrature_panels) {
  (void)boundary;
  const BoundaryChain chain = extract_chain(*solid.space, BoundaryTag::Component);
  ReliabilityResult out;
  if (chain.n_nodes() == 0) {
    out.pof = pof_from_jr(0.0, model.cycles, model.weibull_m);
    return out;
  }
  // The Lame constants only enter through the recovered stress field, which
  // is already assembled; reconstruct gradients with the same constants.
  std::vector<double> integrand(chain.n_nodes(), 0.0);
  for (int i = 0; i < chain.n_nodes(); ++i) {
    const int node = chain.nodes[i];
    const StressTensor s = stress_at_node(solid, node);
    const StressTensorGrad gsig =
        stress_grad_at_node(solid, node, solid.lambda, solid.mu);
    const double n_det = deterministic_life(s, gsig, model);
    integrand[i] = std::pow(1.0 / n_det, model.weibull_m);
  }
  out.j_r = surface_quadrature(
      *solid.space, chain,
      [&](int edge, double xi, Vec2) {
        return chain_value_at(chain, integrand, edge, xi);
      },
      quadrature_panels);
  out.pof = pof_from_jr(out.j_r, model.cycles, model.weibull_m);
  return out;
}

double local_cost_functional(
    const Mesh* volume_mesh, const std::function<double(Vec2)>& f_vol,
    const P2Space* surface_space, const BoundaryChain* chain,
    const std::function<double(const SurfacePoint&)>& f_sur) {
  double j_vol = 0.0;
  if (volume_mesh && f_vol) {
    const auto& tq = tri_rule_3();
    for (int e = 0; e < volume_mesh->n_triangles(); ++e) {
      const double area = volume_mesh->triangle_area(e);
      const auto& t = volume_mesh->triangles[e];
      for (std::size_t q = 0; q < tq.points.size(); ++q) {
        const auto& l = tq.points[q];
        const Vec2 x = volume_mesh->nodes[t[0]] * l[0] +
                       volume_mesh->nodes[t[1]] * l[1] +
                       volume_mesh->nodes[t[2]] * l[2];
        j_vol += tq.weights[q] * area * f_vol(x);
      }
    }
  }
  double j_sur = 0.0;
  if (surface_space && chain && f_sur && chain->n_nodes() > 0) {
    j_sur = surface_quadrature(*surface_space, *chain,
                               [&](int edge, double xi, Vec2 x) {
                                 return f_sur(SurfacePoint{edge, xi, x});
                               });
  }
  return j_vol + j_sur;
}

void ObjectiveVector::check_finite() const {
  for (double v : values)
    if (!std::isfinite(v))
      throw Error(ErrorCode::ConfigError, "objective value is not finite");
}

}  // namespace pflow
