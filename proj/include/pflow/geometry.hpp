#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pflow/core.hpp"
#include "pflow/hoelder.hpp"

namespace pflow {

enum class BoundaryTag { Inlet, Outlet, Wall, Component, Clamp };

const char* to_string(BoundaryTag t);
BoundaryTag boundary_tag_from_string(const std::string& s);

/// Smooth closed parametric curve, parameter t in [0, 2*pi).
/// Supported kinds: circle, ellipse, and a periodic Catmull-Rom spline
/// through control points. All provide two derivatives.
class ClosedCurve {
 public:
  static ClosedCurve circle(Vec2 center, double radius);
  static ClosedCurve ellipse(Vec2 center, double rx, double ry);
  static ClosedCurve spline(std::vector<Vec2> control_points);

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  /// Unit outward normal assuming counterclockwise orientation.
  Vec2 outward_normal(double t) const;
  /// Parameter of the closest curve point to p (coarse scan + Newton polish).
  double closest_parameter(const Vec2& p) const;
  double max_radius_of_curvature_safe() const { return reach_; }

 private:
  enum class Kind { Circle, Ellipse, Spline } kind_ = Kind::Circle;
  Vec2 center_;
  double rx_ = 1.0, ry_ = 1.0;
  std::vector<Vec2> ctrl_;
  double reach_ = 1.0;  // lower bound on the curvature radius / clearance

  void compute_reach();
};

struct ClampDisc {
  Vec2 center;
  double radius = 0.0;
};

/// Finite-dimensional description of the admissible shape family: a baseline
/// boundary, the shroud D it interacts with, the exterior box carrying the
/// deformation fields, the clamp disc B, and the norm- and mode-bounds of the
/// boundary deformations.
struct ShapeSpaceConfig {
  ClosedCurve baseline;
  Rect shroud;
  Rect exterior_box;
  ClampDisc clamp;
  int hoelder_k = 2;
  double hoelder_alpha = 0.5;
  double norm_bound = 1.0;  // K
  int n_modes = 4;
  double leading_edge_t = kPi;  // marked, transform-invariant boundary point
  BoundaryTag fixed_region_tag = BoundaryTag::Wall;

  // Numerical knobs of the deformation extension and its screening.
  double collar_fraction = 0.35;  // blend support, fraction of curve reach
  double mask_margin = 0.35;      // parameter margin inside the wetted arc
  int norm_grid_n = 48;           // samples per axis for the norm estimate

  void validate() const;  // throws ConfigError on invariant violations

  /// Wetted parameter interval(s): the part of the baseline boundary inside
  /// the shroud. Empty when the shape is fully immersed (all wetted).
  struct WettedArc {
    double t_begin = 0.0;
    double t_end = kTwoPi;  // may exceed 2*pi when wrapping
    bool full_boundary = true;
  };
  WettedArc wetted_arc() const;
};

/// Boundary-normal deformation induced by one coefficient vector: a
/// trigonometric series in the boundary parameter (every mode vanishes at the
/// leading edge), masked to the wetted arc, and extended into the plane by a
/// compactly supported radial blend around the baseline boundary.
class Deformation {
 public:
  Deformation(std::shared_ptr<const ShapeSpaceConfig> config,
              std::vector<double> coefficients);

  double amplitude(double t) const;     // normal displacement on the boundary
  double amplitude_d1(double t) const;  // d/dt of the above
  Vec2 boundary_point(double t) const;
  Vec2 boundary_d1(double t) const;
  Vec2 displacement(const Vec2& p) const;  // psi(p) - p in the plane
  Vec2 apply(const Vec2& p) const { return p + displacement(p); }
  /// Inverse of apply by fixed-point iteration (tolerance 1e-10).
  Vec2 invert(const Vec2& q) const;

  const ShapeSpaceConfig& config() const { return *config_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double basis_sup_norm() const;

 private:
  std::shared_ptr<const ShapeSpaceConfig> config_;
  std::vector<double> coefficients_;
  double collar_ = 0.0;
  bool masked_ = false;
  double mask_lo_ = 0.0, mask_hi_ = kTwoPi;  // support of the mask in t

  double mask(double t) const;
  double mask_d1(double t) const;
};

/// One admissible shape: a coefficient vector on a shared ShapeSpaceConfig.
/// Constructed through realize_shape, which screens the norm bound and
/// boundary validity.
class Shape {
 public:
  const ShapeSpaceConfig& config() const { return *config_; }
  std::shared_ptr<const ShapeSpaceConfig> config_ptr() const { return config_; }
  const std::vector<double>& coefficients() const { return deformation_.coefficients(); }
  const Deformation& deformation() const { return deformation_; }
  double leading_edge_t() const { return config_->leading_edge_t; }

  Vec2 boundary_point(double t) const { return deformation_.boundary_point(t); }
  Vec2 boundary_d1(double t) const { return deformation_.boundary_d1(t); }
  /// Discretized boundary as a point cloud (for Hausdorff distances).
  std::vector<Vec2> boundary_cloud(int resolution) const;

 private:
  friend Shape realize_shape(std::shared_ptr<const ShapeSpaceConfig>,
                             std::span<const double>);
  Shape(std::shared_ptr<const ShapeSpaceConfig> cfg, std::vector<double> c)
      : config_(cfg), deformation_(cfg, std::move(c)) {}

  std::shared_ptr<const ShapeSpaceConfig> config_;
  Deformation deformation_;
};

/// Safety factor of the norm screening_: the discrete estimator converges to
/// the Hoelder norm from below as the sampling grid refines (the order-k
/// seminorm is the slow part), so acceptance demands estimate * safety <= K.
/// The factor is calibrated so that re-estimates on a 2x finer grid stay
/// within 5% of K for every accepted shape.
inline constexpr double kNormScreeningSafety = 2.0;

/// Builds a Shape and enforces the admissibility screening:
///  - coefficient count matches n_modes,
///  - induced boundary simple and closed (SelfIntersection otherwise),
///  - discrete Hoelder norm of the deformation field and of its inverse,
///    both scaled by kNormScreeningSafety, <= K (NormBoundViolation).
Shape realize_shape(std::shared_ptr<const ShapeSpaceConfig> config,
                    std::span<const double> coefficients);

/// Deformation-field norm estimate used by the screening, exposed for tests:
/// samples the (forward or inverse) displacement on a norm_grid_n x
/// norm_grid_n grid over the exterior box and runs hoelder_norm_estimate.
double deformation_norm_estimate(const Deformation& d, bool inverse,
                                 int grid_n = 0);

/// Ordered discrete description of a shape boundary: vertices, outward unit
/// normals, arc-length distance to the leading edge (shorter way around), and
/// a tag per segment. Vertex 0 sits exactly on the leading edge.
struct BoundaryGeometry {
  std::vector<Vec2> vertices;
  std::vector<Vec2> normals;
  std::vector<double> arclength_to_le;
  std::vector<double> cumulative_arclength;  // from the leading edge, CCW
  std::vector<double> params;                // curve parameter per vertex
  std::vector<BoundaryTag> segment_tags;     // segment i: vertex i -> i+1
  double perimeter = 0.0;
  int leading_edge_index = 0;

  int size() const { return static_cast<int>(vertices.size()); }
  bool segment_wetted(int i) const {
    return segment_tags[i] == BoundaryTag::Component;
  }
  /// Clamp floor for the leading-edge distance in the wall-shear integrand.
  double dist_le_floor() const { return 1e-6 * perimeter; }
  void export_csv(const std::string& path) const;
};

/// Samples the deformed boundary at `resolution` vertices (uniform in the
/// curve parameter, vertex 0 at the leading edge) with analytic normals and
/// Gauss-quadrature arc lengths. Segments inside the shroud are tagged
/// Component, the rest carry the configured fixed-region tag.
BoundaryGeometry boundary_geometry(const Shape& shape, int resolution);

/// Hausdorff distance between finite point sets,
/// max(sup_a inf_b, sup_b inf_a) in the Euclidean metric.
/// Throws EmptySet when either set is empty.
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

/// Quick perimeter estimate from a fine polyline (used to pick resolutions).
double estimate_perimeter(const Shape& shape);

}  // namespace pflow
