#include "pflow/flow.hpp"

#include <cmath>
#include <fstream>

#include "pflow/errors.hpp"

namespace pflow {

namespace {

// Quadratic trace shape functions on an edge, xi in [0,1]: ends a, b and
// midpoint m.
inline void edge_trace(double xi, double& na, double& nm, double& nb) {
  na = (1.0 - xi) * (1.0 - 2.0 * xi);
  nm = 4.0 * xi * (1.0 - xi);
  nb = xi * (2.0 * xi - 1.0);
}

bool is_flux_tag(BoundaryTag t) {
  return t == BoundaryTag::Inlet || t == BoundaryTag::Outlet;
}

}  // namespace

FlowProblem FlowProblem::create(std::shared_ptr<const Mesh> mesh,
                                const Profile& profile, Vec2 pin_point,
                                double density, double stagnation_pressure) {
  FlowProblem p;
  p.mesh = std::move(mesh);
  p.space = std::make_shared<P2Space>(P2Space::build(*p.mesh));
  p.g.assign(p.mesh->boundary_edges.size(), {0.0, 0.0, 0.0});
  for (std::size_t k = 0; k < p.mesh->boundary_edges.size(); ++k) {
    const auto& be = p.mesh->boundary_edges[k];
    if (!is_flux_tag(be.tag)) continue;
    const auto& d = p.space->bedge_dofs[k];
    const Vec2 tangent =
        (p.mesh->nodes[be.b] - p.mesh->nodes[be.a]).normalized();
    const Vec2 normal{tangent.y, -tangent.x};  // region lies to the left
    for (int i = 0; i < 3; ++i)
      p.g[k][i] = profile(p.space->nodes[d[i]], normal, be.tag);
  }
  p.pin_point = pin_point;
  p.density = density;
  p.stagnation_pressure = stagnation_pressure;
  return p;
}

FlowProblem FlowProblem::uniform_inflow(std::shared_ptr<const Mesh> mesh,
                                        double U, Vec2 pin_point,
                                        double density,
                                        double stagnation_pressure) {
  // Measure tagged boundary lengths first, then scale the outlet value so the
  // discrete integral vanishes identically.
  double len_in = 0.0, len_out = 0.0;
  for (const auto& e : mesh->boundary_edges) {
    const double len = dist(mesh->nodes[e.a], mesh->nodes[e.b]);
    if (e.tag == BoundaryTag::Inlet) len_in += len;
    if (e.tag == BoundaryTag::Outlet) len_out += len;
  }
  if (len_in <= 0.0 || len_out <= 0.0)
    throw Error(ErrorCode::IncompatibleData,
                "mesh has no inlet or outlet boundary");
  const double out_value = U * len_in / len_out;
  return create(
      std::move(mesh),
      [U, out_value](Vec2, Vec2, BoundaryTag tag) {
        return tag == BoundaryTag::Inlet ? -U : out_value;
      },
      pin_point, density, stagnation_pressure);
}

double FlowProblem::g_integral() const {
  const auto& qr = edge_rule_3();
  double total = 0.0;
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
    if (!is_flux_tag(mesh->boundary_edges[k].tag)) continue;
    const auto& d = space->bedge_dofs[k];
    const double len = dist(space->nodes[d[0]], space->nodes[d[1]]);
    for (int q = 0; q < 3; ++q) {
      double na, nm, nb;
      edge_trace(qr.points[q], na, nm, nb);
      total += qr.weights[q] * len *
               (na * g[k][0] + nm * g[k][2] + nb * g[k][1]);
    }
  }
  return total;
}

double FlowProblem::g_abs_integral() const {
  const auto& qr = edge_rule_3();
  double total = 0.0;
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
    if (!is_flux_tag(mesh->boundary_edges[k].tag)) continue;
    const auto& d = space->bedge_dofs[k];
    const double len = dist(space->nodes[d[0]], space->nodes[d[1]]);
    for (int q = 0; q < 3; ++q) {
      double na, nm, nb;
      edge_trace(qr.points[q], na, nm, nb);
      total += qr.weights[q] * len *
               std::abs(na * g[k][0] + nm * g[k][2] + nb * g[k][1]);
    }
  }
  return total;
}

void FlowProblem::check_compatibility() const {
  const double defect = g_integral();
  const double scale = std::max(1.0, g_abs_integral());
  if (std::abs(defect) > 1e-10 * scale)
    throw Error(ErrorCode::IncompatibleData,
                "boundary data violates the compatibility condition, "
                "integral g dA = " +
                    std::to_string(defect));
}

void FlowProblem::project_compatible() {
  double support = 0.0;
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k)
    if (is_flux_tag(mesh->boundary_edges[k].tag))
      support += dist(mesh->nodes[mesh->boundary_edges[k].a],
                      mesh->nodes[mesh->boundary_edges[k].b]);
  if (support <= 0.0) return;
  const double shift = g_integral() / support;
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
    if (!is_flux_tag(mesh->boundary_edges[k].tag)) continue;
    for (double& v : g[k]) v -= shift;
  }
}

FlowSolution solve_flow(const FlowProblem& problem) {
  problem.check_compatibility();
  const P2Space& sp = *problem.space;
  const Mesh& mesh = *problem.mesh;
  const int n = sp.n_nodes();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 36 + 2 * n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);

  const auto& tq = tri_rule_3();
  Vec2 grad[6];
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const double area = mesh.triangle_area(e);
    const auto& dofs = sp.elem_dofs[e];
    double ke[6][6] = {};
    for (std::size_t q = 0; q < tq.points.size(); ++q) {
      p2_grad(sp, e, tq.points[q].data(), grad);
      const double w = tq.weights[q] * area;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) ke[i][j] += w * grad[i].dot(grad[j]);
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        trips.emplace_back(dofs[i], dofs[j], ke[i][j]);
  }

  // Mean-value constraint row/column (Lagrange multiplier).
  {
    const auto& mq = tri_rule_7();
    std::vector<double> m(n, 0.0);
    double N[6];
    for (int e = 0; e < mesh.n_triangles(); ++e) {
      const double area = mesh.triangle_area(e);
      const auto& dofs = sp.elem_dofs[e];
      for (std::size_t q = 0; q < mq.points.size(); ++q) {
        p2_basis(mq.points[q].data(), N);
        for (int i = 0; i < 6; ++i)
          m[dofs[i]] += mq.weights[q] * area * N[i];
      }
    }
    for (int i = 0; i < n; ++i) {
      if (m[i] == 0.0) continue;
      trips.emplace_back(i, n, m[i]);
      trips.emplace_back(n, i, m[i]);
    }
  }

  // Neumann load on inlet/outlet edges.
  const auto& qr = edge_rule_3();
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    const auto tag = mesh.boundary_edges[k].tag;
    if (tag != BoundaryTag::Inlet && tag != BoundaryTag::Outlet) continue;
    const auto& d = sp.bedge_dofs[k];
    const double len = dist(sp.nodes[d[0]], sp.nodes[d[1]]);
    for (int q = 0; q < 3; ++q) {
      double na, nm, nb;
      edge_trace(qr.points[q], na, nm, nb);
      const double gq = na * problem.g[k][0] + nm * problem.g[k][2] +
                        nb * problem.g[k][1];
      const double w = qr.weights[q] * len * gq;
      rhs[d[0]] += w * na;
      rhs[d[2]] += w * nm;
      rhs[d[1]] += w * nb;
    }
  }

  Eigen::SparseMatrix<double> A(n + 1, n + 1);
  A.setFromTriplets(trips.begin(), trips.end());

  FlowSolution sol;
  sol.space = problem.space;
  Eigen::VectorXd x =
      solve_sparse(A, rhs, problem.rel_tol, /*spd=*/false, &sol.residual);

  sol.phi.space = problem.space.get();
  sol.phi.ncomp = 1;
  sol.phi.values.assign(x.data(), x.data() + n);

  // Pin the additive constant at x0.
  int pin_elem = 0;
  double lam[3];
  if (!locate_point(mesh, problem.pin_point, pin_elem, lam))
    throw Error(ErrorCode::ConfigError,
                "pin point lies outside the fluid mesh");
  const double shift = sol.phi.eval(pin_elem, lam);
  for (double& v : sol.phi.values) v -= shift;

  // Velocity by patch recovery of the elementwise gradient; Dirichlet energy
  // from the raw gradient.
  std::vector<std::vector<double>> samples(
      static_cast<std::size_t>(mesh.n_triangles()) * 3,
      std::vector<double>(2, 0.0));
  double energy = 0.0;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const double area = mesh.triangle_area(e);
    for (int q = 0; q < 3; ++q) {
      const Vec2 v = sol.phi.eval_grad(e, tq.points[q].data());
      samples[e * 3 + q] = {v.x, v.y};
      energy += 0.5 * tq.weights[q] * area * v.squared_norm();
    }
  }
  sol.dirichlet_energy = energy;
  sol.velocity.space = problem.space.get();
  sol.velocity.ncomp = 2;
  sol.velocity.values = spr_recover(sp, samples, 2);

  sol.component_chain = extract_chain(sp, BoundaryTag::Component);
  sol.boundary_speed.resize(sol.component_chain.n_nodes());
  for (int i = 0; i < sol.component_chain.n_nodes(); ++i) {
    const int node = sol.component_chain.nodes[i];
    sol.boundary_speed[i] =
        Vec2{sol.velocity.value(node, 0), sol.velocity.value(node, 1)}.norm();
  }
  return sol;
}

double FlowSolution::speed_at(const Vec2& p) const {
  int e = 0;
  double lam[3];
  if (!locate_point(*space->mesh, p, e, lam)) return 0.0;
  double N[6];
  p2_basis(lam, N);
  const auto& dofs = space->elem_dofs[e];
  Vec2 v{0.0, 0.0};
  for (int i = 0; i < 6; ++i) {
    v.x += N[i] * velocity.value(dofs[i], 0);
    v.y += N[i] * velocity.value(dofs[i], 1);
  }
  return v.norm();
}

void FlowSolution::export_csv(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  out << "node,x,y,phi,vx,vy\n";
  for (int i = 0; i < space->n_nodes(); ++i)
    out << i << ',' << space->nodes[i].x << ',' << space->nodes[i].y << ','
        << phi.value(i) << ',' << velocity.value(i, 0) << ','
        << velocity.value(i, 1) << '\n';
}

std::vector<double> static_pressure(const FlowSolution& solution,
                                    const FlowProblem& problem,
                                    const BoundaryGeometry& boundary) {
  std::vector<double> p_s(boundary.size(), 0.0);
  for (int i = 0; i < boundary.size(); ++i) {
    // A vertex is wetted when one of its incident segments is.
    const int prev = (i + boundary.size() - 1) % boundary.size();
    if (!boundary.segment_wetted(i) && !boundary.segment_wetted(prev)) continue;
    const double speed = solution.speed_at(boundary.vertices[i]);
    p_s[i] = problem.stagnation_pressure -
             0.5 * problem.density * speed * speed;
  }
  return p_s;
}

std::vector<Vec2> traction_from_pressure(const std::vector<double>& p_s,
                                         const BoundaryGeometry& boundary) {
  if (static_cast<int>(p_s.size()) != boundary.size())
    throw Error(ErrorCode::LengthMismatch,
                "pressure samples do not match the boundary sampling");
  std::vector<Vec2> g(boundary.size());
  for (int i = 0; i < boundary.size(); ++i)
    g[i] = boundary.normals[i] * (-p_s[i]);
  return g;
}

}  // namespace pflow
