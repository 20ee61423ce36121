#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "pflow/errors.hpp"
#include "pflow/mesh.hpp"
#include "test_helpers.hpp"

using namespace pflow;
using namespace pflow::testing;

namespace {

Shape baseline_shape() {
  auto cfg = crossing_config();
  return realize_shape(cfg, std::vector<double>(cfg->n_modes, 0.0));
}

bool conforming(const Mesh& m) {
  // Every edge is shared by at most two triangles and no node repeats.
  std::unordered_map<long long, int> count;
  auto key = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<long long>(a) << 32) | b;
  };
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e)
      if (++count[key(t[e], t[(e + 1) % 3])] > 2) return false;
  for (int i = 0; i < m.n_nodes(); ++i)
    for (int j = i + 1; j < m.n_nodes(); ++j)
      if (dist(m.nodes[i], m.nodes[j]) < 1e-12) return false;
  return true;
}

double polygon_area(const std::vector<Vec2>& loop) {
  double s = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i)
    s += loop[i].cross(loop[(i + 1) % loop.size()]);
  return 0.5 * std::abs(s);
}

}  // namespace

TEST_CASE("mesh_fluid: nodes lie inside the shroud and outside the component") {
  const Shape s = baseline_shape();
  const Mesh m = mesh_fluid(s, 0.1);
  const auto& cfg = s.config();
  for (const auto& p : m.nodes) {
    CHECK(p.x >= cfg.shroud.x0 - 1e-9);
    CHECK(p.x <= cfg.shroud.x1 + 1e-9);
    CHECK(p.y >= cfg.shroud.y0 - 1e-9);
    CHECK(p.y <= cfg.shroud.y1 + 1e-9);
    // Strictly interior component points are excluded.
    const double t = cfg.baseline.closest_parameter(p);
    const Vec2 q = s.boundary_point(t);
    const Vec2 n = cfg.baseline.outward_normal(t);
    CHECK((p - q).dot(n) >= -1e-9);
  }
}

TEST_CASE("mesh_fluid: h_max scales with the requested h") {
  const Shape s = baseline_shape();
  const Mesh coarse = mesh_fluid(s, 0.16);
  const Mesh fine = mesh_fluid(s, 0.08);
  CHECK(coarse.h_max <= 0.16 + 1e-12);
  CHECK(fine.h_max <= 0.08 + 1e-12);
  // Halving h halves h_max within a factor of 1.5.
  CHECK(fine.h_max >= coarse.h_max / 2.0 / 1.5);
}

TEST_CASE("mesh_fluid: all four tags present in the crossing setup") {
  const Shape s = baseline_shape();
  const Mesh m = mesh_fluid(s, 0.1);
  CHECK(m.has_tag(BoundaryTag::Inlet));
  CHECK(m.has_tag(BoundaryTag::Outlet));
  CHECK(m.has_tag(BoundaryTag::Wall));
  CHECK(m.has_tag(BoundaryTag::Component));
  CHECK(!m.has_tag(BoundaryTag::Clamp));
}

TEST_CASE("mesh quality: 20 degree floor and conformity") {
  const Shape s = baseline_shape();
  for (double h : {0.12, 0.07}) {
    const Mesh m = mesh_fluid(s, h);
    CHECK(m.min_angle_deg() >= 20.0 - 1e-6);
    CHECK(conforming(m));
    for (int t = 0; t < m.n_triangles(); ++t)
      CHECK(m.triangle_area(t) > 0.0);  // positive orientation
  }
}

TEST_CASE("mesh areas sum to the polygonal region area") {
  const Shape s = baseline_shape();
  const Mesh m = mesh_fluid(s, 0.1);
  // Boundary polygon of the meshed region, recovered from boundary edges.
  std::unordered_map<int, int> next;
  for (const auto& e : m.boundary_edges) next[e.a] = e.b;
  std::vector<Vec2> loop;
  int start = m.boundary_edges.front().a;
  int cur = start;
  do {
    loop.push_back(m.nodes[cur]);
    cur = next.at(cur);
  } while (cur != start && loop.size() <= next.size());
  CHECK(loop.size() == next.size());  // single closed boundary loop
  const double poly = polygon_area(loop);
  CHECK(m.total_area() == doctest::Approx(poly).epsilon(1e-8));
}

TEST_CASE("mesh_fluid: euler characteristic matches the crossing topology") {
  const Shape s = baseline_shape();
  const Mesh m = mesh_fluid(s, 0.1);
  // Component attached to the outer boundary: a disc, chi = 1.
  CHECK(m.euler_characteristic() == 1);
}

TEST_CASE("mesh_solid: annulus-like region with clamp edges on the disc") {
  const Shape s = baseline_shape();
  const Mesh m = mesh_solid(s, 0.1);
  CHECK(m.has_tag(BoundaryTag::Clamp));
  CHECK(m.has_tag(BoundaryTag::Component));
  CHECK(m.euler_characteristic() == 0);  // one hole
  CHECK(m.min_angle_deg() >= 20.0 - 1e-6);
  // Clamp edges lie on the clamp circle.
  const auto& clamp = s.config().clamp;
  for (const auto& e : m.boundary_edges) {
    if (e.tag != BoundaryTag::Clamp) continue;
    CHECK(dist(m.nodes[e.a], clamp.center) ==
          doctest::Approx(clamp.radius).epsilon(1e-9));
  }
  // Area: component polygon minus clamp polygon.
  const BoundaryGeometry bg = boundary_geometry(
      s, boundary_resolution_for(estimate_perimeter(s), 0.1));
  double clamp_poly = 0.0;
  {
    std::vector<Vec2> loop;
    for (const auto& e : m.boundary_edges)
      if (e.tag == BoundaryTag::Clamp) loop.push_back(m.nodes[e.a]);
    std::sort(loop.begin(), loop.end(), [&](const Vec2& a, const Vec2& b) {
      return std::atan2(a.y - clamp.center.y, a.x - clamp.center.x) <
             std::atan2(b.y - clamp.center.y, b.x - clamp.center.x);
    });
    clamp_poly = polygon_area(loop);
  }
  const double outer_poly = polygon_area(bg.vertices);
  CHECK(m.total_area() == doctest::Approx(outer_poly - clamp_poly).epsilon(1e-8));
}

TEST_CASE("mesh_solid: node counts grow ~4x per refinement halving") {
  const Shape s = baseline_shape();
  const Mesh m1 = mesh_solid(s, 0.12);
  const Mesh m2 = mesh_solid(s, 0.06);
  const Mesh m3 = mesh_solid(s, 0.03);
  const double r1 = static_cast<double>(m2.n_nodes()) / m1.n_nodes();
  const double r2 = static_cast<double>(m3.n_nodes()) / m2.n_nodes();
  CHECK(r1 > 2.0);
  CHECK(r1 < 8.0);
  CHECK(r2 > 2.5);
  CHECK(r2 < 6.5);
}

TEST_CASE("mesh_solid: clamp overlapping the boundary fails") {
  auto cfg = crossing_config();
  auto bad = std::make_shared<ShapeSpaceConfig>(*cfg);
  bad->clamp = ClampDisc{{2.0, -0.45}, 0.349};  // nearly touches the circle
  const Shape s = realize_shape(bad, std::vector<double>(bad->n_modes, 0.0));
  CHECK_THROWS_AS(mesh_solid(s, 0.1), Error);
}

TEST_CASE("mesh text round trip") {
  const Shape s = baseline_shape();
  const Mesh m = mesh_fluid(s, 0.12);
  save_mesh("roundtrip.mesh", m);
  const Mesh r = load_mesh("roundtrip.mesh");
  REQUIRE(r.n_nodes() == m.n_nodes());
  REQUIRE(r.n_triangles() == m.n_triangles());
  REQUIRE(r.boundary_edges.size() == m.boundary_edges.size());
  CHECK(r.nodes[7].x == m.nodes[7].x);
  CHECK(r.triangles[3] == m.triangles[3]);
  CHECK(r.boundary_edges[5].tag == m.boundary_edges[5].tag);
  std::remove("roundtrip.mesh");
}

TEST_CASE("mesh_channel: rectangle with tags and exact area") {
  const Rect box{0.0, 0.0, 2.0, 1.0};
  const Mesh m = mesh_channel(box, 0.1, 0.0);
  CHECK(m.has_tag(BoundaryTag::Inlet));
  CHECK(m.has_tag(BoundaryTag::Outlet));
  CHECK(m.has_tag(BoundaryTag::Wall));
  CHECK(m.total_area() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.euler_characteristic() == 1);
  CHECK(m.min_angle_deg() >= 20.0 - 1e-6);
}

TEST_CASE("mesh_fluid: deformed shape meshes cleanly") {
  auto cfg = crossing_config();
  const Shape s =
      realize_shape(cfg, std::vector<double>{0.04, -0.03, 0.02, 0.01});
  const Mesh mf = mesh_fluid(s, 0.09);
  const Mesh ms = mesh_solid(s, 0.09);
  CHECK(mf.min_angle_deg() >= 20.0 - 1e-6);
  CHECK(ms.min_angle_deg() >= 20.0 - 1e-6);
  CHECK(conforming(mf));
  CHECK(conforming(ms));
}

TEST_CASE("mesh_fluid: fully immersed component becomes a hole") {
  auto cfg = immersed_config();
  const Shape s = realize_shape(cfg, std::vector<double>(cfg->n_modes, 0.0));
  const BoundaryGeometry bg = boundary_geometry(s, 128);
  FluidMeshOptions opts;
  opts.h = 0.35;
  const Mesh m = mesh_fluid(s, bg, opts);
  CHECK(m.euler_characteristic() == 0);  // annular topology
  CHECK(m.has_tag(BoundaryTag::Component));
  CHECK(m.has_tag(BoundaryTag::Inlet));
  CHECK(m.min_angle_deg() >= 20.0 - 1e-6);
  // No node inside the component.
  for (const auto& p : m.nodes) CHECK(p.norm() >= 1.0 - 1e-9);
}
