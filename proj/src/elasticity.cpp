#include "pflow/elasticity.hpp"

#include <cmath>
#include <fstream>

#include "pflow/errors.hpp"

namespace pflow {

namespace {
inline void edge_trace(double xi, double& na, double& nm, double& nb) {
  na = (1.0 - xi) * (1.0 - 2.0 * xi);
  nm = 4.0 * xi * (1.0 - xi);
  nb = xi * (2.0 * xi - 1.0);
}
}  // namespace

ElasticityProblem ElasticityProblem::create(std::shared_ptr<const Mesh> mesh,
                                            double lambda, double mu) {
  ElasticityProblem p;
  p.mesh = std::move(mesh);
  p.space = std::make_shared<P2Space>(P2Space::build(*p.mesh));
  p.lambda = lambda;
  p.mu = mu;
  p.traction.assign(p.mesh->boundary_edges.size(),
                    {Vec2{0.0, 0.0}, Vec2{0.0, 0.0}, Vec2{0.0, 0.0}});
  return p;
}

void ElasticityProblem::set_traction(BoundaryTag tag,
                                     const std::function<Vec2(Vec2)>& law) {
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
    if (mesh->boundary_edges[k].tag != tag) continue;
    const auto& d = space->bedge_dofs[k];
    for (int i = 0; i < 3; ++i) traction[k][i] = law(space->nodes[d[i]]);
  }
}

void ElasticityProblem::validate() const {
  if (lambda <= 0.0 || mu <= 0.0)
    throw Error(ErrorCode::ConfigError, "Lame constants must be positive");
  if (!mesh->has_tag(BoundaryTag::Clamp))
    throw Error(ErrorCode::MissingClamp, "no clamp boundary in the solid mesh");
  if (traction.size() != mesh->boundary_edges.size())
    throw Error(ErrorCode::LengthMismatch,
                "traction samples do not match the boundary edge count");
}

ElasticitySolution solve_elasticity(const ElasticityProblem& problem) {
  problem.validate();
  const P2Space& sp = *problem.space;
  const Mesh& mesh = *problem.mesh;
  const int n = sp.n_nodes();
  const int ndof = 2 * n;
  const double la = problem.lambda, mu = problem.mu;

  // Dirichlet set: both components of every node on a clamp edge.
  std::vector<char> clamped(n, 0);
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k)
    if (mesh.boundary_edges[k].tag == BoundaryTag::Clamp)
      for (int node : sp.bedge_dofs[k]) clamped[node] = 1;
  std::vector<double> bc(ndof, 0.0);
  if (problem.clamp_displacement)
    for (int i = 0; i < n; ++i)
      if (clamped[i]) {
        const Vec2 u = problem.clamp_displacement(sp.nodes[i]);
        bc[2 * i] = u.x;
        bc[2 * i + 1] = u.y;
      }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ndof);

  // Volume load (7-point rule).
  if (problem.volume_load) {
    const auto& vq = tri_rule_7();
    double N[6];
    for (int e = 0; e < mesh.n_triangles(); ++e) {
      const double area = mesh.triangle_area(e);
      const auto& dofs = sp.elem_dofs[e];
      for (std::size_t q = 0; q < vq.points.size(); ++q) {
        p2_basis(vq.points[q].data(), N);
        Vec2 xq{0.0, 0.0};
        for (int i = 0; i < 3; ++i)
          xq += mesh.nodes[mesh.triangles[e][i]] * vq.points[q][i];
        const Vec2 f = problem.volume_load(xq);
        const double w = vq.weights[q] * area;
        for (int i = 0; i < 6; ++i) {
          rhs[2 * dofs[i]] += w * N[i] * f.x;
          rhs[2 * dofs[i] + 1] += w * N[i] * f.y;
        }
      }
    }
  }

  // Traction on every non-clamp boundary edge (zero samples contribute zero).
  const auto& qr = edge_rule_3();
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    if (mesh.boundary_edges[k].tag == BoundaryTag::Clamp) continue;
    const auto& d = sp.bedge_dofs[k];
    const double len = dist(sp.nodes[d[0]], sp.nodes[d[1]]);
    const Vec2 ga = problem.traction[k][0];
    const Vec2 gb = problem.traction[k][1];
    const Vec2 gm = problem.traction[k][2];
    for (int q = 0; q < 3; ++q) {
      double na, nm, nb;
      edge_trace(qr.points[q], na, nm, nb);
      const Vec2 gq = ga * na + gm * nm + gb * nb;
      const double w = qr.weights[q] * len;
      rhs[2 * d[0]] += w * na * gq.x;
      rhs[2 * d[0] + 1] += w * na * gq.y;
      rhs[2 * d[2]] += w * nm * gq.x;
      rhs[2 * d[2] + 1] += w * nm * gq.y;
      rhs[2 * d[1]] += w * nb * gq.x;
      rhs[2 * d[1] + 1] += w * nb * gq.y;
    }
  }

  // Stiffness with symmetric elimination of the clamped dofs.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 144 + ndof);
  const auto& tq = tri_rule_3();
  Vec2 grad[6];
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const double area = mesh.triangle_area(e);
    const auto& dofs = sp.elem_dofs[e];
    double ke[12][12] = {};
    for (std::size_t q = 0; q < tq.points.size(); ++q) {
      p2_grad(sp, e, tq.points[q].data(), grad);
      const double w = tq.weights[q] * area;
      for (int i = 0; i < 6; ++i) {
        const double gi[2] = {grad[i].x, grad[i].y};
        for (int j = 0; j < 6; ++j) {
          const double gj[2] = {grad[j].x, grad[j].y};
          const double gg = grad[i].dot(grad[j]);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              double v = la * gi[a] * gj[b] + mu * gi[b] * gj[a];
              if (a == b) v += mu * gg;
              ke[2 * i + a][2 * j + b] += w * v;
            }
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      const int r = 2 * dofs[i / 2] + i % 2;
      const bool rc = clamped[dofs[i / 2]];
      for (int j = 0; j < 12; ++j) {
        const int c = 2 * dofs[j / 2] + j % 2;
        const bool cc = clamped[dofs[j / 2]];
        if (rc) continue;
        if (cc)
          rhs[r] -= ke[i][j] * bc[c];
        else
          trips.emplace_back(r, c, ke[i][j]);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (clamped[i]) {
      trips.emplace_back(2 * i, 2 * i, 1.0);
      trips.emplace_back(2 * i + 1, 2 * i + 1, 1.0);
      rhs[2 * i] = bc[2 * i];
      rhs[2 * i + 1] = bc[2 * i + 1];
    }

  Eigen::SparseMatrix<double> A(ndof, ndof);
  A.setFromTriplets(trips.begin(), trips.end());

  ElasticitySolution sol;
  sol.space = problem.space;
  sol.lambda = la;
  sol.mu = mu;
  Eigen::VectorXd x =
      solve_sparse(A, rhs, problem.rel_tol, /*spd=*/true, &sol.residual);
  sol.displacement.space = problem.space.get();
  sol.displacement.ncomp = 2;
  sol.displacement.values.assign(x.data(), x.data() + ndof);

  // Strain energy and stress samples at the recovery points.
  std::vector<std::vector<double>> stress_samples(
      static_cast<std::size_t>(mesh.n_triangles()) * 3,
      std::vector<double>(4, 0.0));
  std::vector<std::vector<double>> grad_samples(
      static_cast<std::size_t>(mesh.n_triangles()) * 3,
      std::vector<double>(4, 0.0));
  double energy = 0.0;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const double area = mesh.triangle_area(e);
    for (int q = 0; q < 3; ++q) {
      const Vec2 gx = sol.displacement.eval_grad(e, tq.points[q].data(), 0);
      const Vec2 gy = sol.displacement.eval_grad(e, tq.points[q].data(), 1);
      const double div = gx.x + gy.y;
      const double exx = gx.x, eyy = gy.y, exy = 0.5 * (gx.y + gy.x);
      const double sxx = la * div + 2.0 * mu * exx;
      const double syy = la * div + 2.0 * mu * eyy;
      const double sxy = 2.0 * mu * exy;
      const double szz = la * div;  // plane strain
      stress_samples[e * 3 + q] = {sxx, syy, sxy, szz};
      grad_samples[e * 3 + q] = {gx.x, gx.y, gy.x, gy.y};
      energy += 0.5 * tq.weights[q] * area *
                (sxx * exx + syy * eyy + 2.0 * sxy * exy);
    }
  }
  sol.strain_energy = energy;

  sol.stress.space = problem.space.get();
  sol.stress.ncomp = 4;
  sol.stress.values = spr_recover(sp, stress_samples, 4);
  sol.grad_u.space = problem.space.get();
  sol.grad_u.ncomp = 4;
  sol.grad_u.values = spr_recover(sp, grad_samples, 4);

  // Second derivatives: gradients of the recovered gradient field, recovered
  // once more (two-stage patch recovery).
  std::vector<std::vector<double>> hess_samples(
      static_cast<std::size_t>(mesh.n_triangles()) * 3,
      std::vector<double>(6, 0.0));
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    for (int q = 0; q < 3; ++q) {
      const Vec2 d_uxx = sol.grad_u.eval_grad(e, tq.points[q].data(), 0);
      const Vec2 d_uxy = sol.grad_u.eval_grad(e, tq.points[q].data(), 1);
      const Vec2 d_uyx = sol.grad_u.eval_grad(e, tq.points[q].data(), 2);
      const Vec2 d_uyy = sol.grad_u.eval_grad(e, tq.points[q].data(), 3);
      hess_samples[e * 3 + q] = {d_uxx.x,
                                 0.5 * (d_uxx.y + d_uxy.x),
                                 d_uxy.y,
                                 d_uyx.x,
                                 0.5 * (d_uyx.y + d_uyy.x),
                                 d_uyy.y};
    }
  }
  sol.hess_u.space = problem.space.get();
  sol.hess_u.ncomp = 6;
  sol.hess_u.values = spr_recover(sp, hess_samples, 6);

  // External work of the loads against the computed displacement.
  double work = 0.0;
  if (problem.volume_load) {
    const auto& vq = tri_rule_7();
    double N[6];
    for (int e = 0; e < mesh.n_triangles(); ++e) {
      const double area = mesh.triangle_area(e);
      const auto& dofs = sp.elem_dofs[e];
      for (std::size_t q = 0; q < vq.points.size(); ++q) {
        p2_basis(vq.points[q].data(), N);
        Vec2 xq{0.0, 0.0}, uq{0.0, 0.0};
        for (int i = 0; i < 3; ++i)
          xq += mesh.nodes[mesh.triangles[e][i]] * vq.points[q][i];
        for (int i = 0; i < 6; ++i) {
          uq.x += N[i] * sol.displacement.value(dofs[i], 0);
          uq.y += N[i] * sol.displacement.value(dofs[i], 1);
        }
        work += vq.weights[q] * area * problem.volume_load(xq).dot(uq);
      }
    }
  }
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    if (mesh.boundary_edges[k].tag == BoundaryTag::Clamp) continue;
    const auto& d = sp.bedge_dofs[k];
    const double len = dist(sp.nodes[d[0]], sp.nodes[d[1]]);
    for (int q = 0; q < 3; ++q) {
      double na, nm, nb;
      edge_trace(qr.points[q], na, nm, nb);
      const Vec2 gq = problem.traction[k][0] * na + problem.traction[k][2] * nm +
                      problem.traction[k][1] * nb;
      Vec2 uq{0.0, 0.0};
      const int ids[3] = {d[0], d[2], d[1]};
      const double sh[3] = {na, nm, nb};
      for (int i = 0; i < 3; ++i) {
        uq.x += sh[i] * sol.displacement.value(ids[i], 0);
        uq.y += sh[i] * sol.displacement.value(ids[i], 1);
      }
      work += qr.weights[q] * len * gq.dot(uq);
    }
  }
  sol.external_work = work;
  return sol;
}

void ElasticitySolution::export_csv(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  out << "node,x,y,ux,uy,sxx,syy,sxy,von_mises\n";
  for (int i = 0; i < space->n_nodes(); ++i) {
    const double sxx = stress.value(i, 0), syy = stress.value(i, 1);
    const double sxy = stress.value(i, 2), szz = stress.value(i, 3);
    const double vm = std::sqrt(0.5 * ((sxx - syy) * (sxx - syy) +
                                       (syy - szz) * (syy - szz) +
                                       (szz - sxx) * (szz - sxx)) +
                                3.0 * sxy * sxy);
    out << i << ',' << space->nodes[i].x << ',' << space->nodes[i].y << ','
        << displacement.value(i, 0) << ',' << displacement.value(i, 1) << ','
        << sxx << ',' << syy << ',' << sxy << ',' << vm << '\n';
  }
}

// ---------------------------------------------------------------------------
// One-way coupling

CoupledSolution coupled_solve(const Shape& shape, const CoupledConfig& config) {
  CoupledSolution cs;
  const auto& scfg = shape.config();

  const int res = std::max(1, config.boundary_resolution_factor) *
                  boundary_resolution_for(estimate_perimeter(shape),
                                          std::min(config.h_fluid, config.h_solid));
  cs.boundary = boundary_geometry(shape, res);

  FluidMeshOptions fm;
  fm.h = config.h_fluid;
  fm.corner_rounding = config.corner_rounding;
  cs.fluid_mesh = std::make_shared<Mesh>(mesh_fluid(shape, cs.boundary, fm));

  Vec2 pin = config.pin_point;
  if (config.pin_default) {
    // A point near the inlet, clear of the component.
    pin = Vec2{scfg.shroud.x0 + 0.12 * scfg.shroud.width(),
               scfg.shroud.y0 + 0.5 * scfg.shroud.height()};
  }
  cs.flow_problem = FlowProblem::uniform_inflow(
      cs.fluid_mesh, config.inflow_U, pin, config.density,
      config.stagnation_pressure);
  if (config.outflow_scale != 1.0)
    for (std::size_t k = 0; k < cs.fluid_mesh->boundary_edges.size(); ++k)
      if (cs.fluid_mesh->boundary_edges[k].tag == BoundaryTag::Outlet)
        for (double& v : cs.flow_problem.g[k]) v *= config.outflow_scale;
  cs.flow_problem.rel_tol = config.rel_tol;
  cs.flow = solve_flow(cs.flow_problem);

  cs.solid_mesh =
      std::make_shared<Mesh>(mesh_solid(shape, cs.boundary, config.h_solid));

  ElasticityProblem ep =
      ElasticityProblem::create(cs.solid_mesh, config.lambda, config.mu);
  ep.rel_tol = config.rel_tol;
  if (config.body_force.x != 0.0 || config.body_force.y != 0.0) {
    const Vec2 f = config.body_force;
    ep.volume_load = [f](Vec2) { return f; };
  }

  // Traction transfer: p_s and the boundary normal are interpolated along the
  // fluid component chain at the arc coordinate of each solid wetted node.
  const BoundaryChain& fchain = cs.flow.component_chain;
  std::vector<double> ps_chain(fchain.n_nodes());
  for (int i = 0; i < fchain.n_nodes(); ++i) {
    const double sp = cs.flow.boundary_speed[i];
    ps_chain[i] =
        config.stagnation_pressure - 0.5 * config.density * sp * sp;
  }

  cs.wetted_chain = extract_chain(*ep.space, BoundaryTag::Component);
  if (cs.wetted_chain.n_nodes() == 0)
    throw Error(ErrorCode::MeshFailure, "solid mesh has no wetted boundary");

  // Both chains discretize the same wetted polyline (up to the
  // junction-adjacent chords), so values transfer by nearest-node matching
  // with a projection fallback for the few non-shared nodes.
  auto lookup = [&](const Vec2& p, const std::vector<double>& values) {
    int best = 0;
    double best_d = 1e300;
    for (int j = 0; j < fchain.n_nodes(); ++j) {
      const double d =
          (cs.flow.space->nodes[fchain.nodes[j]] - p).squared_norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best_d < 1e-20) return values[best];
    // Project onto the segments around the nearest node.
    double s = fchain.s[best];
    for (int j : {best - 1, best}) {
      if (j < 0 || j + 1 >= fchain.n_nodes()) continue;
      const Vec2 a = cs.flow.space->nodes[fchain.nodes[j]];
      const Vec2 b = cs.flow.space->nodes[fchain.nodes[j + 1]];
      const double len2 = (b - a).squared_norm();
      if (len2 <= 0.0) continue;
      const double w = std::clamp((p - a).dot(b - a) / len2, 0.0, 1.0);
      const Vec2 proj = a + (b - a) * w;
      if ((proj - p).squared_norm() <= best_d + 1e-30)
        s = fchain.s[j] * (1.0 - w) + fchain.s[j + 1] * w;
    }
    return chain_interpolate(fchain, values, s);
  };

  // Traction per wetted solid boundary edge; dry and clamp edges keep their
  // zero samples (the pressure is extended by zero off the shroud).
  auto traction_at = [&](const Vec2& p) {
    const double ps = lookup(p, ps_chain);
    const double t = scfg.baseline.closest_parameter(p);
    Vec2 nrm = shape.boundary_d1(t).normalized();
    nrm = Vec2{nrm.y, -nrm.x};
    return nrm * (-ps);
  };
  for (std::size_t k = 0; k < cs.solid_mesh->boundary_edges.size(); ++k) {
    if (cs.solid_mesh->boundary_edges[k].tag != BoundaryTag::Component)
      continue;
    const auto& d = ep.space->bedge_dofs[k];
    for (int i = 0; i < 3; ++i)
      ep.traction[k][i] = traction_at(ep.space->nodes[d[i]]);
  }

  // Per-node diagnostics along the wetted chain (speed, leading-edge arc).
  cs.wetted_speed.resize(cs.wetted_chain.n_nodes());
  cs.wetted_dist_le.resize(cs.wetted_chain.n_nodes());
  for (int i = 0; i < cs.wetted_chain.n_nodes(); ++i) {
    const Vec2 p = ep.space->nodes[cs.wetted_chain.nodes[i]];
    cs.wetted_speed[i] = lookup(p, cs.flow.boundary_speed);
    const double t = scfg.baseline.closest_parameter(p);
    double dt = t - scfg.leading_edge_t;
    dt -= std::floor(dt / kTwoPi) * kTwoPi;
    const int nb = cs.boundary.size();
    const double fi = dt / kTwoPi * nb;
    const int i0 = std::min(static_cast<int>(fi), nb - 1);
    const double w = fi - i0;
    const double s0 = cs.boundary.cumulative_arclength[i0];
    const double s1 = (i0 + 1 < nb) ? cs.boundary.cumulative_arclength[i0 + 1]
                                    : cs.boundary.perimeter;
    const double arc = s0 * (1.0 - w) + s1 * w;
    cs.wetted_dist_le[i] = std::min(arc, cs.boundary.perimeter - arc);
  }

  cs.solid = solve_elasticity(ep);
  return cs;
}

}  // namespace pflow
