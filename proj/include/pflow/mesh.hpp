#pragma once

#include <array>
#include <string>
#include <vector>

#include "pflow/core.hpp"
#include "pflow/geometry.hpp"

namespace pflow {

enum class MeshRegion { Fluid, Solid };

struct BoundaryEdge {
  int a = 0;
  int b = 0;  // oriented so the mesh interior lies to the left
  BoundaryTag tag = BoundaryTag::Wall;
};

/// Conforming triangle mesh with tagged boundary edges. Triangles are
/// positively oriented; boundary edges run counterclockwise around the
/// region (outward normal = edge direction rotated clockwise).
struct Mesh {
  static constexpr int dim = kDim;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h_max = 0.0;
  MeshRegion region = MeshRegion::Fluid;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  double total_area() const;
  double min_angle_deg() const;
  double longest_edge(int t) const;
  /// V - E + F of the triangulated surface (without the outer face).
  int euler_characteristic() const;
  bool has_tag(BoundaryTag t) const;
};

/// Planar straight-line graph: input to the triangulator. Loops are closed
/// polylines (counterclockwise outer boundary, any orientation for holes);
/// each loop segment carries a tag. hole_seeds mark interior points of holes.
struct Pslg {
  std::vector<std::vector<Vec2>> loops;
  std::vector<std::vector<BoundaryTag>> loop_tags;  // tag per segment of loop
  std::vector<Vec2> hole_seeds;

  void add_loop(std::vector<Vec2> pts, BoundaryTag tag);
  void add_loop(std::vector<Vec2> pts, std::vector<BoundaryTag> tags);
};

struct MeshOptions {
  double h = 0.1;                // maximum element diameter
  double min_angle_deg = 20.0;   // quality floor
  int max_vertices = 400000;     // refinement runaway guard
};

/// Constrained Delaunay triangulation with Ruppert-style refinement to the
/// requested quality floor and size bound. Throws MeshFailure when the
/// geometry cannot be meshed at the requested size.
Mesh triangulate(const Pslg& pslg, const MeshOptions& opts);

struct FluidMeshOptions {
  double h = 0.1;
  double corner_rounding = -1.0;  // arc radius; <0 means 2*h, 0 disables
  int boundary_resolution = 0;    // 0: derived from h
};

/// Triangulates the fluid region D \ Omega with tags inlet/outlet/wall on the
/// shroud boundary and component on the wetted part of the shape boundary.
/// All wetted BoundaryGeometry vertices become mesh nodes.
Mesh mesh_fluid(const Shape& shape, double h);
Mesh mesh_fluid(const Shape& shape, const BoundaryGeometry& bg,
                const FluidMeshOptions& opts);

/// Triangulates the solid region Omega \ B with the clamp tag on the disc
/// boundary, component on the wetted boundary and wall on the dry remainder.
Mesh mesh_solid(const Shape& shape, double h);
Mesh mesh_solid(const Shape& shape, const BoundaryGeometry& bg, double h);

/// Triangulates the full component Omega (no clamp hole); used for volume
/// integrals of local cost functionals.
Mesh mesh_component(const Shape& shape, const BoundaryGeometry& bg, double h);

/// Obstacle-free rectangular channel with inlet on the left edge, outlet on
/// the right and walls top/bottom.
Mesh mesh_channel(const Rect& box, double h, double corner_rounding = 0.0);

/// Resolution used for boundary sampling at mesh size h.
int boundary_resolution_for(double perimeter, double h);

void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace pflow
