#include <doctest.h>

#include <cmath>
#include <functional>

#include "pflow/elasticity.hpp"
#include "pflow/errors.hpp"
#include "test_helpers.hpp"

using namespace pflow;
using namespace pflow::testing;

namespace {

// Unit square with the left edge clamped and the rest open for traction.
std::shared_ptr<Mesh> clamped_square(double h) {
  auto m = std::make_shared<Mesh>(mesh_channel(Rect{0.0, 0.0, 1.0, 1.0}, h, 0.0));
  for (auto& e : m->boundary_edges) {
    if (e.tag == BoundaryTag::Inlet)
      e.tag = BoundaryTag::Clamp;
    else if (e.tag == BoundaryTag::Outlet)
      e.tag = BoundaryTag::Component;
  }
  return m;
}

// Annulus a < r < b, clamp on the inner circle, component tag outside.
std::shared_ptr<Mesh> annulus(double a, double b, double h) {
  const int no = std::max(24, static_cast<int>(std::ceil(kTwoPi * b / (0.72 * h))));
  const int ni = std::max(16, static_cast<int>(std::ceil(kTwoPi * a / (0.72 * h))));
  std::vector<Vec2> outer(no), inner(ni);
  for (int i = 0; i < no; ++i)
    outer[i] = {b * std::cos(kTwoPi * i / no), b * std::sin(kTwoPi * i / no)};
  for (int i = 0; i < ni; ++i)
    inner[i] = {a * std::cos(kTwoPi * i / ni), a * std::sin(kTwoPi * i / ni)};
  Pslg pslg;
  pslg.add_loop(outer, BoundaryTag::Component);
  pslg.add_loop(inner, BoundaryTag::Clamp);
  MeshOptions mo;
  mo.h = h;
  auto m = std::make_shared<Mesh>(triangulate(pslg, mo));
  m->region = MeshRegion::Solid;
  return m;
}



}  // namespace

TEST_CASE("zero loads give the zero displacement") {
  auto mesh = clamped_square(0.15);
  ElasticityProblem p = ElasticityProblem::create(mesh, 1.2, 0.8);
  const ElasticitySolution sol = solve_elasticity(p);
  for (double v : sol.displacement.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("missing clamp is rejected") {
  auto m = std::make_shared<Mesh>(mesh_channel(Rect{0, 0, 1, 1}, 0.2, 0.0));
  ElasticityProblem p = ElasticityProblem::create(m, 1.0, 1.0);
  CHECK_THROWS_AS(solve_elasticity(p), Error);
  try {
    solve_elasticity(p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingClamp);
  }
}

TEST_CASE("patch test: uniform uniaxial stress is reproduced to 1e-8") {
  const double la = 2.0, mu = 1.5, pres = 3.0;
  // Exact plane-strain state sigma_xx = pres, all other components zero.
  const double exx = pres * (la + 2.0 * mu) / (4.0 * mu * (la + mu));
  const double eyy = -pres * la / (4.0 * mu * (la + mu));
  auto exact = [&](Vec2 x) { return Vec2{exx * x.x, eyy * x.y}; };

  auto mesh = clamped_square(0.18);
  ElasticityProblem p = ElasticityProblem::create(mesh, la, mu);
  p.clamp_displacement = exact;
  p.set_traction(BoundaryTag::Component, [&](Vec2) { return Vec2{pres, 0.0}; });
  const ElasticitySolution sol = solve_elasticity(p);

  for (int i = 0; i < sol.space->n_nodes(); ++i) {
    const Vec2 want = exact(sol.space->nodes[i]);
    CHECK(std::abs(sol.displacement.value(i, 0) - want.x) < 1e-8);
    CHECK(std::abs(sol.displacement.value(i, 1) - want.y) < 1e-8);
    CHECK(std::abs(sol.stress.value(i, 0) - pres) < 1e-8);
    CHECK(std::abs(sol.stress.value(i, 1)) < 1e-8);
    CHECK(std::abs(sol.stress.value(i, 2)) < 1e-8);
  }
}

TEST_CASE("pressurized thick-walled cylinder matches the Lame solution") {
  const double a = 0.2, b = 0.5, la = 5.0, mu = 3.0, pres = 1.0;
  // u_r = A r + B / r with u_r(a) = 0 and sigma_rr(b) = -pres.
  const double A = -pres / (2.0 * (la + mu) + 2.0 * mu * a * a / (b * b));
  const double B = -A * a * a;
  auto u_exact = [&](double r) { return A * r + B / r; };

  for (double h : {0.1, 0.025}) {
    auto mesh = annulus(a, b, h);
    ElasticityProblem p = ElasticityProblem::create(mesh, la, mu);
    p.set_traction(BoundaryTag::Component,
                   [&](Vec2 x) { return x.normalized() * (-pres); });
    const ElasticitySolution sol = solve_elasticity(p);

    double max_rel = 0.0;
    for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
      if (mesh->boundary_edges[k].tag != BoundaryTag::Component) continue;
      for (int n : sol.space->bedge_dofs[k]) {
        const Vec2 x = sol.space->nodes[n];
        const double r = x.norm();
        const Vec2 u{sol.displacement.value(n, 0), sol.displacement.value(n, 1)};
        const double ur = u.dot(x / r);
        max_rel = std::max(max_rel,
                           std::abs(ur - u_exact(r)) / std::abs(u_exact(b)));
      }
    }
    if (h < 0.05) CHECK(max_rel < 0.01);  // within 1% at h -> h/4
  }
}

TEST_CASE("work balance: external work equals twice the strain energy") {
  const double a = 0.2, b = 0.5;
  auto mesh = annulus(a, b, 0.06);
  ElasticityProblem p = ElasticityProblem::create(mesh, 2.0, 1.0);
  p.set_traction(BoundaryTag::Component,
                 [&](Vec2 x) { return x.normalized() * (-0.7); });
  p.volume_load = [](Vec2) { return Vec2{0.1, -0.05}; };
  const ElasticitySolution sol = solve_elasticity(p);
  CHECK(sol.external_work ==
        doctest::Approx(2.0 * sol.strain_energy).epsilon(1e-8));
}

TEST_CASE("manufactured displacement converges in L2 at order >= 2.5") {
  const double la = 1.3, mu = 0.9;
  auto exact = [](Vec2 p) {
    return Vec2{std::sin(kPi * p.x) * std::sin(kPi * p.y),
                std::cos(kPi * p.x) * std::cos(kPi * p.y)};
  };
  // Divergence-free field: f = -div sigma = 2 mu pi^2 u.
  auto load = [mu, exact](Vec2 p) { return exact(p) * (2.0 * mu * kPi * kPi); };
  auto sigma = [&](Vec2 p) {
    // Only the diagonal survives: sigma = mu diag(2 pi cos sin, -2 pi cos sin).
    const double s = 2.0 * mu * kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y);
    return std::array<double, 3>{s, -s, 0.0};
  };

  std::vector<double> errors;
  for (double h : {0.2, 0.1, 0.05}) {
    auto mesh = clamped_square(h);
    ElasticityProblem p = ElasticityProblem::create(mesh, la, mu);
    p.clamp_displacement = exact;
    p.volume_load = load;
    for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
      const auto& be = mesh->boundary_edges[k];
      if (be.tag == BoundaryTag::Clamp) continue;
      const Vec2 tangent = (mesh->nodes[be.b] - mesh->nodes[be.a]).normalized();
      const Vec2 n{tangent.y, -tangent.x};
      const auto& d = p.space->bedge_dofs[k];
      for (int i = 0; i < 3; ++i) {
        const auto s = sigma(p.space->nodes[d[i]]);
        p.traction[k][i] = {s[0] * n.x + s[2] * n.y, s[2] * n.x + s[1] * n.y};
      }
    }
    const ElasticitySolution sol = solve_elasticity(p);
    const auto& tq = tri_rule_7();
    double acc = 0.0;
    for (int e = 0; e < mesh->n_triangles(); ++e) {
      const double area = mesh->triangle_area(e);
      const auto& t = mesh->triangles[e];
      for (std::size_t q = 0; q < tq.points.size(); ++q) {
        Vec2 x{0.0, 0.0};
        for (int i = 0; i < 3; ++i) x += mesh->nodes[t[i]] * tq.points[q][i];
        const Vec2 want = exact(x);
        const double dx = sol.displacement.eval(e, tq.points[q].data(), 0) - want.x;
        const double dy = sol.displacement.eval(e, tq.points[q].data(), 1) - want.y;
        acc += tq.weights[q] * area * (dx * dx + dy * dy);
      }
    }
    errors.push_back(std::sqrt(acc));
  }
  const double rate1 = std::log2(errors[0] / errors[1]);
  const double rate2 = std::log2(errors[1] / errors[2]);
  INFO("errors ", errors[0], " ", errors[1], " ", errors[2]);
  CHECK(rate1 >= 2.5);
  CHECK(rate2 >= 2.5);
}

TEST_CASE("recovered boundary hessian is exact for quadratic displacements") {
  const double la = 2.0, mu = 1.0;
  auto exact = [](Vec2 p) {
    return Vec2{p.x * p.x + 3.0 * p.x * p.y, 2.0 * p.y * p.y - p.x * p.x};
  };
  // div u = 2x + 7y; sigma_xx = la (2x + 7y) + 2 mu (2x + 3y),
  // sigma_yy = la (2x + 7y) + 8 mu y, sigma_xy = mu x; f = -div sigma.
  const Vec2 f{-(2.0 * la + 4.0 * mu), -(7.0 * la + 9.0 * mu)};

  auto mesh = clamped_square(0.12);
  ElasticityProblem p = ElasticityProblem::create(mesh, la, mu);
  p.clamp_displacement = exact;
  p.volume_load = [f](Vec2) { return f; };
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
    const auto& be = mesh->boundary_edges[k];
    if (be.tag == BoundaryTag::Clamp) continue;
    const Vec2 tangent = (mesh->nodes[be.b] - mesh->nodes[be.a]).normalized();
    const Vec2 n{tangent.y, -tangent.x};
    const auto& d = p.space->bedge_dofs[k];
    for (int i = 0; i < 3; ++i) {
      const Vec2 x = p.space->nodes[d[i]];
      const double sxx =
          la * (2.0 * x.x + 7.0 * x.y) + 2.0 * mu * (2.0 * x.x + 3.0 * x.y);
      const double syy = la * (2.0 * x.x + 7.0 * x.y) + 8.0 * mu * x.y;
      const double sxy = mu * x.x;
      p.traction[k][i] = {sxx * n.x + sxy * n.y, sxy * n.x + syy * n.y};
    }
  }
  const ElasticitySolution sol = solve_elasticity(p);
  // Exact second derivatives: ux: (2, 3, 0); uy: (-2, 0, 4).
  const double want[6] = {2.0, 3.0, 0.0, -2.0, 0.0, 4.0};
  for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
    for (int nd : sol.space->bedge_dofs[k]) {
      for (int c = 0; c < 6; ++c)
        CHECK(std::abs(sol.hess_u.value(nd, c) - want[c]) < 1e-6);
    }
  }
}

TEST_CASE("coupled no-flow limit: uniform pressure load, nonzero displacement") {
  auto cfg = crossing_config();
  const Shape s = realize_shape(cfg, std::vector<double>(cfg->n_modes, 0.0));
  CoupledConfig cc;
  cc.inflow_U = 0.0;
  cc.stagnation_pressure = 2.0;
  cc.h_fluid = 0.12;
  cc.h_solid = 0.08;
  cc.lambda = 40.0;
  cc.mu = 30.0;
  const CoupledSolution cs = coupled_solve(s, cc);
  double max_u = 0.0;
  for (double v : cs.solid.displacement.values)
    max_u = std::max(max_u, std::abs(v));
  CHECK(max_u > 1e-6);
  // Traction on the wetted chain equals -p_st n within discretization error.
  CHECK(cs.solid.external_work ==
        doctest::Approx(2.0 * cs.solid.strain_energy).epsilon(1e-8));
}

TEST_CASE("coupled continuity: displacement differences shrink with delta") {
  auto cfg = crossing_config();
  CoupledConfig cc;
  cc.h_fluid = 0.1;
  cc.h_solid = 0.08;
  cc.lambda = 40.0;
  cc.mu = 30.0;
  const Shape base = realize_shape(cfg, std::vector<double>(cfg->n_modes, 0.0));
  const CoupledSolution cs0 = coupled_solve(base, cc);

  // Probe points well inside the solid region.
  std::vector<Vec2> probes;
  for (int i = 0; i < 12; ++i) {
    const double ang = kTwoPi * i / 12;
    probes.push_back(Vec2{2.0 + 0.32 * std::cos(ang), -0.2 + 0.32 * std::sin(ang)});
  }
  auto max_diff = [&](const CoupledSolution& a, const CoupledSolution& b) {
    double m = 0.0;
    for (const Vec2& p : probes) {
      int ea, eb;
      double la[3], lb[3];
      if (!locate_point(*a.solid_mesh, p, ea, la)) continue;
      if (!locate_point(*b.solid_mesh, p, eb, lb)) continue;
      for (int c = 0; c < 2; ++c)
        m = std::max(m, std::abs(a.solid.displacement.eval(ea, la, c) -
                                 b.solid.displacement.eval(eb, lb, c)));
    }
    return m;
  };

  std::vector<double> deltas{0.02, 0.01, 0.005};
  std::vector<double> ratios;
  for (double d : deltas) {
    std::vector<double> c(cfg->n_modes, 0.0);
    c[0] = d;
    const Shape s = realize_shape(cfg, c);
    const double dh = hausdorff_distance(base.boundary_cloud(256),
                                         s.boundary_cloud(256));
    const CoupledSolution cs = coupled_solve(s, cc);
    ratios.push_back(max_diff(cs0, cs) / dh);
  }
  // Empirical Lipschitz ratio stays within a factor ~2.5 under halving.
  CHECK(ratios[1] <= 2.5 * ratios[0]);
  CHECK(ratios[2] <= 2.5 * ratios[1]);
  CHECK(ratios[1] >= ratios[0] / 2.5);
  CHECK(ratios[2] >= ratios[1] / 2.5);
}
