#include "pflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "pflow/errors.hpp"

namespace pflow {

const char* to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Inlet: return "inlet";
    case BoundaryTag::Outlet: return "outlet";
    case BoundaryTag::Wall: return "wall";
    case BoundaryTag::Component: return "component";
    case BoundaryTag::Clamp: return "clamp";
  }
  return "unknown";
}

BoundaryTag boundary_tag_from_string(const std::string& s) {
  if (s == "inlet") return BoundaryTag::Inlet;
  if (s == "outlet") return BoundaryTag::Outlet;
  if (s == "wall") return BoundaryTag::Wall;
  if (s == "component") return BoundaryTag::Component;
  if (s == "clamp") return BoundaryTag::Clamp;
  throw Error(ErrorCode::ConfigError, "unknown boundary tag '" + s + "'");
}

// ---------------------------------------------------------------------------
// ClosedCurve

ClosedCurve ClosedCurve::circle(Vec2 center, double radius) {
  ClosedCurve c;
  c.kind_ = Kind::Circle;
  c.center_ = center;
  c.rx_ = c.ry_ = radius;
  c.compute_reach();
  return c;
}

ClosedCurve ClosedCurve::ellipse(Vec2 center, double rx, double ry) {
  ClosedCurve c;
  c.kind_ = Kind::Ellipse;
  c.center_ = center;
  c.rx_ = rx;
  c.ry_ = ry;
  c.compute_reach();
  return c;
}

ClosedCurve ClosedCurve::spline(std::vector<Vec2> control_points) {
  if (control_points.size() < 4)
    throw Error(ErrorCode::ConfigError,
                "spline baseline needs at least 4 control points");
  ClosedCurve c;
  c.kind_ = Kind::Spline;
  c.ctrl_ = std::move(control_points);
  c.compute_reach();
  return c;
}

namespace {
// Periodic Catmull-Rom evaluation on segment-local coordinate s in [0,1].
Vec2 catmull(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3,
             double s, int deriv) {
  const Vec2 a = 2.0 * p1;
  const Vec2 b = p2 - p0;
  const Vec2 c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const Vec2 d = 3.0 * (p1 - p2) + p3 - p0;
  switch (deriv) {
    case 0: return 0.5 * (a + b * s + c * (s * s) + d * (s * s * s));
    case 1: return 0.5 * (b + c * (2.0 * s) + d * (3.0 * s * s));
    default: return 0.5 * (c * 2.0 + d * (6.0 * s));
  }
}
}  // namespace

Vec2 ClosedCurve::point(double t) const {
  switch (kind_) {
    case Kind::Circle:
    case Kind::Ellipse:
      return {center_.x + rx_ * std::cos(t), center_.y + ry_ * std::sin(t)};
    case Kind::Spline: {
      const int n = static_cast<int>(ctrl_.size());
      double u = t / kTwoPi * n;
      u -= std::floor(u / n) * n;
      int i = static_cast<int>(std::floor(u));
      if (i >= n) i = n - 1;
      const double s = u - i;
      auto P = [&](int k) { return ctrl_[((k % n) + n) % n]; };
      return catmull(P(i - 1), P(i), P(i + 1), P(i + 2), s, 0);
    }
  }
  return {};
}

Vec2 ClosedCurve::d1(double t) const {
  switch (kind_) {
    case Kind::Circle:
    case Kind::Ellipse:
      return {-rx_ * std::sin(t), ry_ * std::cos(t)};
    case Kind::Spline: {
      const int n = static_cast<int>(ctrl_.size());
      double u = t / kTwoPi * n;
      u -= std::floor(u / n) * n;
      int i = static_cast<int>(std::floor(u));
      if (i >= n) i = n - 1;
      const double s = u - i;
      auto P = [&](int k) { return ctrl_[((k % n) + n) % n]; };
      return catmull(P(i - 1), P(i), P(i + 1), P(i + 2), s, 1) * (n / kTwoPi);
    }
  }
  return {};
}

Vec2 ClosedCurve::d2(double t) const {
  switch (kind_) {
    case Kind::Circle:
    case Kind::Ellipse:
      return {-rx_ * std::cos(t), -ry_ * std::sin(t)};
    case Kind::Spline: {
      const int n = static_cast<int>(ctrl_.size());
      double u = t / kTwoPi * n;
      u -= std::floor(u / n) * n;
      int i = static_cast<int>(std::floor(u));
      if (i >= n) i = n - 1;
      const double s = u - i;
      auto P = [&](int k) { return ctrl_[((k % n) + n) % n]; };
      const double sc = n / kTwoPi;
      return catmull(P(i - 1), P(i), P(i + 1), P(i + 2), s, 2) * (sc * sc);
    }
  }
  return {};
}

Vec2 ClosedCurve::outward_normal(double t) const {
  const Vec2 T = d1(t).normalized();
  return {T.y, -T.x};  // CCW curve: rotate the tangent clockwise
}

void ClosedCurve::compute_reach() {
  if (kind_ == Kind::Circle) {
    reach_ = rx_;
    return;
  }
  double min_r = std::numeric_limits<double>::max();
  const int n = 512;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    const Vec2 v = d1(t), a = d2(t);
    const double speed = v.norm();
    const double kappa = std::abs(v.cross(a)) / (speed * speed * speed + 1e-300);
    min_r = std::min(min_r, (kappa > 1e-12) ? 1.0 / kappa : 1e6);
  }
  reach_ = min_r;
}

double ClosedCurve::closest_parameter(const Vec2& p) const {
  // Coarse scan, then Newton on (x(t)-p).x'(t) = 0 with bisection fallback.
  const int n = 256;
  double best_t = 0.0, best_d = std::numeric_limits<double>::max();
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    const double d = (point(t) - p).squared_norm();
    if (d < best_d) {
      best_d = d;
      best_t = t;
    }
  }
  double t = best_t;
  for (int it = 0; it < 30; ++it) {
    const Vec2 r = point(t) - p;
    const Vec2 v = d1(t);
    const double g = r.dot(v);
    const double gp = v.squared_norm() + r.dot(d2(t));
    if (std::abs(gp) < 1e-30) break;
    const double step = g / gp;
    t -= step;
    if (std::abs(step) < 1e-14) break;
  }
  // Reject Newton escapes to a worse point.
  if ((point(t) - p).squared_norm() > best_d + 1e-14) t = best_t;
  t -= std::floor(t / kTwoPi) * kTwoPi;
  return t;
}

// ---------------------------------------------------------------------------
// ShapeSpaceConfig

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                        const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q - p).cross(r - p);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

bool polyline_is_simple(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % n];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // shared endpoint
      if (segments_intersect(a, b, pts[j], pts[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool point_in_closed_curve(const ClosedCurve& curve, const Vec2& p, int n = 512) {
  int crossings = 0;
  Vec2 prev = curve.point(0.0);
  for (int i = 1; i <= n; ++i) {
    const Vec2 cur = curve.point(kTwoPi * i / n);
    if ((prev.y > p.y) != (cur.y > p.y)) {
      const double x = prev.x + (p.y - prev.y) / (cur.y - prev.y) * (cur.x - prev.x);
      if (x > p.x) ++crossings;
    }
    prev = cur;
  }
  return crossings % 2 == 1;
}

}  // namespace

ShapeSpaceConfig::WettedArc ShapeSpaceConfig::wetted_arc() const {
  const int n = 2048;
  std::vector<double> crossings;
  bool prev_in = shroud.contains(baseline.point(0.0));
  const bool first_in = prev_in;
  for (int i = 1; i <= n; ++i) {
    const double t = kTwoPi * i / n;
    const bool in = shroud.contains(baseline.point(t));
    if (in != prev_in) {
      double lo = kTwoPi * (i - 1) / n, hi = t;
      for (int b = 0; b < 60; ++b) {
        const double mid = 0.5 * (lo + hi);
        if (shroud.contains(baseline.point(mid)) == prev_in)
          lo = mid;
        else
          hi = mid;
      }
      crossings.push_back(0.5 * (lo + hi));
      prev_in = in;
    }
  }
  WettedArc arc;
  if (crossings.empty()) {
    if (!first_in)
      throw Error(ErrorCode::ConfigError,
                  "baseline boundary lies entirely outside the shroud");
    arc.full_boundary = true;
    return arc;
  }
  if (crossings.size() != 2)
    throw Error(ErrorCode::ConfigError,
                "baseline boundary must cross the shroud exactly twice");
  arc.full_boundary = false;
  // Order so that (t_begin, t_end) is the inside interval.
  double t0 = crossings[0], t1 = crossings[1];
  const double mid = 0.5 * (t0 + t1);
  if (shroud.contains(baseline.point(mid))) {
    arc.t_begin = t0;
    arc.t_end = t1;
  } else {
    arc.t_begin = t1;
    arc.t_end = t0 + kTwoPi;
  }
  return arc;
}

void ShapeSpaceConfig::validate() const {
  if (norm_bound <= 0.0)
    throw Error(ErrorCode::ConfigError, "norm_bound K must be positive");
  if (hoelder_alpha <= 0.0 || hoelder_alpha > 1.0)
    throw Error(ErrorCode::ConfigError, "hoelder_alpha must lie in (0,1]");
  if (hoelder_k < 2)
    throw Error(ErrorCode::ConfigError, "hoelder_k must be at least 2");
  if (n_modes < 1)
    throw Error(ErrorCode::ConfigError, "n_modes must be at least 1");
  if (clamp.radius <= 0.0)
    throw Error(ErrorCode::ConfigError, "clamp disc radius must be positive");

  // Baseline boundary simple and closed.
  std::vector<Vec2> pts(512);
  for (int i = 0; i < 512; ++i) pts[i] = baseline.point(kTwoPi * i / 512);
  if (!polyline_is_simple(pts))
    throw Error(ErrorCode::ConfigError, "baseline boundary self-intersects");

  // Clamp disc strictly inside the component and outside the shroud.
  if (!point_in_closed_curve(baseline, clamp.center))
    throw Error(ErrorCode::ConfigError,
                "clamp disc center lies outside the baseline component");
  double min_d = std::numeric_limits<double>::max();
  for (const Vec2& p : pts) min_d = std::min(min_d, dist(p, clamp.center));
  if (min_d <= clamp.radius)
    throw Error(ErrorCode::ConfigError,
                "clamp disc is not strictly inside the baseline component");
  for (int i = 0; i < 64; ++i) {
    const double a = kTwoPi * i / 64;
    const Vec2 q{clamp.center.x + clamp.radius * std::cos(a),
                 clamp.center.y + clamp.radius * std::sin(a)};
    if (shroud.contains(q))
      throw Error(ErrorCode::ConfigError,
                  "clamp disc must lie outside the shroud");
  }

  if (!(exterior_box.x0 <= shroud.x0 && exterior_box.x1 >= shroud.x1 &&
        exterior_box.y0 <= shroud.y0 - 1e-12 && exterior_box.y1 >= shroud.y1))
    throw Error(ErrorCode::ConfigError,
                "exterior box must contain the shroud");

  const WettedArc arc = wetted_arc();
  if (!arc.full_boundary) {
    double t = leading_edge_t;
    while (t < arc.t_begin - 1e-9) t += kTwoPi;
    if (t > arc.t_end + 1e-9)
      throw Error(ErrorCode::ConfigError,
                  "leading edge must lie on the wetted boundary arc");
    const double arc_len = arc.t_end - arc.t_begin;
    if (4.0 * mask_margin >= arc_len)
      throw Error(ErrorCode::ConfigError,
                  "mask margin too large for the wetted arc");
  }
  if (norm_grid_n < hoelder_k + 2)
    throw Error(ErrorCode::GridTooCoarse,
                "norm_grid_n must be at least hoelder_k + 2");
}

// ---------------------------------------------------------------------------
// Deformation

namespace {

// C^3 polynomial transition: 0 for x<=0, 1 for x>=1. Three vanishing
// derivatives at both ends keep the blended fields inside C^{2,alpha} while
// the derivative peaks stay mild enough for the finite-difference norm
// screening to resolve them.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x4 = x * x * x * x;
  return x4 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

double smooth_step_d1(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double u = x * (1.0 - x);
  return 140.0 * u * u * u;
}

double wrap_pm_pi(double d) {
  d = std::fmod(d, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

double basis_eval(int j, double delta) {
  const int freq = j / 2 + 1;
  if (j % 2 == 0) return std::sin(freq * delta);
  return std::cos(freq * delta) - 1.0;
}

double basis_eval_d1(int j, double delta) {
  const int freq = j / 2 + 1;
  if (j % 2 == 0) return freq * std::cos(freq * delta);
  return -freq * std::sin(freq * delta);
}

}  // namespace

Deformation::Deformation(std::shared_ptr<const ShapeSpaceConfig> config,
                         std::vector<double> coefficients)
    : config_(std::move(config)), coefficients_(std::move(coefficients)) {
  const auto& cfg = *config_;
  collar_ = cfg.collar_fraction * cfg.baseline.max_radius_of_curvature_safe();
  const auto arc = cfg.wetted_arc();
  masked_ = !arc.full_boundary;
  if (masked_) {
    mask_lo_ = arc.t_begin + cfg.mask_margin;
    mask_hi_ = arc.t_end - cfg.mask_margin;
  }
}

double Deformation::mask(double t) const {
  if (!masked_) return 1.0;
  const double m = config_->mask_margin;
  const double center = 0.5 * (mask_lo_ + mask_hi_);
  t = center + wrap_pm_pi(t - center);
  if (t <= mask_lo_ || t >= mask_hi_) return 0.0;
  const double rise = smooth_step((t - mask_lo_) / m);
  const double fall = smooth_step((mask_hi_ - t) / m);
  return std::min(rise, fall);
}

double Deformation::mask_d1(double t) const {
  if (!masked_) return 0.0;
  const double m = config_->mask_margin;
  const double center = 0.5 * (mask_lo_ + mask_hi_);
  t = center + wrap_pm_pi(t - center);
  if (t <= mask_lo_ || t >= mask_hi_) return 0.0;
  const double xr = (t - mask_lo_) / m;
  const double xf = (mask_hi_ - t) / m;
  if (smooth_step(xr) < smooth_step(xf)) return smooth_step_d1(xr) / m;
  return -smooth_step_d1(xf) / m;
}

double Deformation::amplitude(double t) const {
  const double w = mask(t);
  if (w == 0.0) return 0.0;
  const double delta = wrap_pm_pi(t - config_->leading_edge_t);
  double s = 0.0;
  for (std::size_t j = 0; j < coefficients_.size(); ++j)
    s += coefficients_[j] * basis_eval(static_cast<int>(j), delta);
  return w * s;
}

double Deformation::amplitude_d1(double t) const {
  const double w = mask(t);
  const double wp = mask_d1(t);
  if (w == 0.0 && wp == 0.0) return 0.0;
  const double delta = wrap_pm_pi(t - config_->leading_edge_t);
  double s = 0.0, sp = 0.0;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    s += coefficients_[j] * basis_eval(static_cast<int>(j), delta);
    sp += coefficients_[j] * basis_eval_d1(static_cast<int>(j), delta);
  }
  return wp * s + w * sp;
}

Vec2 Deformation::boundary_point(double t) const {
  const auto& curve = config_->baseline;
  return curve.point(t) + amplitude(t) * curve.outward_normal(t);
}

Vec2 Deformation::boundary_d1(double t) const {
  const auto& curve = config_->baseline;
  const Vec2 v = curve.d1(t);
  const Vec2 a = curve.d2(t);
  const double speed = v.norm();
  // d/dt of the unit tangent, then rotate to get the normal derivative.
  const Vec2 Tp = (a * speed - v * (v.dot(a) / speed)) / (speed * speed);
  const Vec2 n{v.y / speed, -v.x / speed};
  const Vec2 np{Tp.y, -Tp.x};
  return v + amplitude_d1(t) * n + amplitude(t) * np;
}

Vec2 Deformation::displacement(const Vec2& p) const {
  const auto& curve = config_->baseline;
  const double t = curve.closest_parameter(p);
  const double r = dist(p, curve.point(t));
  if (r >= collar_) return {0.0, 0.0};
  const double w = smooth_step(1.0 - r / collar_);
  const double amp = amplitude(t);
  if (amp == 0.0) return {0.0, 0.0};
  return (w * amp) * curve.outward_normal(t);
}

Vec2 Deformation::invert(const Vec2& q) const {
  // TODO: warm-start closest_parameter from the previous iterate; the cold
  // coarse scan dominates the cost of the inverse-norm screening.
  Vec2 p = q;
  const double tol = 1e-10 * (1.0 + q.norm());
  for (int it = 0; it < 100; ++it) {
    const Vec2 next = q - displacement(p);
    const double step = dist(next, p);
    p = next;
    if (step < tol) return p;
  }
  throw Error(ErrorCode::NonConvergence,
              "fixed-point inversion of the deformation did not converge");
}

double Deformation::basis_sup_norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < coefficients_.size(); ++j)
    if (coefficients_[j] != 0.0) s = std::max(s, (j % 2 == 0) ? 1.0 : 2.0);
  return s;
}

// ---------------------------------------------------------------------------
// realize_shape and the norm screening

double deformation_norm_estimate(const Deformation& d, bool inverse,
                                 int grid_n) {
  const auto& cfg = d.config();
  const int n = grid_n > 0 ? grid_n : cfg.norm_grid_n;
  // The displacement is supported in a collar around the baseline boundary;
  // sampling beyond that support adds zero-field points only, so the grid is
  // clipped to the support's bounding box (padded) inside the exterior box.
  const double collar =
      cfg.collar_fraction * cfg.baseline.max_radius_of_curvature_safe();
  Rect box;
  {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (int i = 0; i < 256; ++i) {
      const Vec2 p = cfg.baseline.point(kTwoPi * i / 256);
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    const double pad = 1.6 * collar;
    box.x0 = std::max(cfg.exterior_box.x0, x0 - pad);
    box.y0 = std::max(cfg.exterior_box.y0, y0 - pad);
    box.x1 = std::min(cfg.exterior_box.x1, x1 + pad);
    box.y1 = std::min(cfg.exterior_box.y1, y1 + pad);
  }
  GridField g;
  g.nx = g.ny = n;
  g.hx = box.width() / (n - 1);
  g.hy = box.height() / (n - 1);
  g.components.assign(2, std::vector<double>(static_cast<std::size_t>(n) * n));
  try {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Vec2 p{box.x0 + i * g.hx, box.y0 + j * g.hy};
        Vec2 disp;
        if (!inverse) {
          disp = d.displacement(p);
        } else {
          disp = d.invert(p) - p;
        }
        g.at(0, i, j) = disp.x;
        g.at(1, i, j) = disp.y;
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonConvergence)
      return std::numeric_limits<double>::infinity();
    throw;
  }
  return hoelder_norm_estimate(g, cfg.hoelder_k, cfg.hoelder_alpha);
}

Shape realize_shape(std::shared_ptr<const ShapeSpaceConfig> config,
                    std::span<const double> coefficients) {
  if (static_cast<int>(coefficients.size()) != config->n_modes)
    throw Error(ErrorCode::LengthMismatch,
                "coefficient count does not match n_modes");
  Shape shape(config, std::vector<double>(coefficients.begin(), coefficients.end()));

  std::vector<Vec2> pts(512);
  for (int i = 0; i < 512; ++i)
    pts[i] = shape.boundary_point(config->leading_edge_t + kTwoPi * i / 512);
  if (!polyline_is_simple(pts))
    throw Error(ErrorCode::SelfIntersection, "induced boundary is not simple");

  const double fwd = kNormScreeningSafety *
                     deformation_norm_estimate(shape.deformation(), false);
  if (!(fwd <= config->norm_bound))
    throw Error(ErrorCode::NormBoundViolation,
                "screened deformation norm " + std::to_string(fwd) +
                    " exceeds K=" + std::to_string(config->norm_bound));
  const double inv = kNormScreeningSafety *
                     deformation_norm_estimate(shape.deformation(), true);
  if (!(inv <= config->norm_bound))
    throw Error(ErrorCode::NormBoundViolation,
                "screened inverse deformation norm " + std::to_string(inv) +
                    " exceeds K=" + std::to_string(config->norm_bound));
  return shape;
}

std::vector<Vec2> Shape::boundary_cloud(int resolution) const {
  std::vector<Vec2> pts(resolution);
  for (int i = 0; i < resolution; ++i)
    pts[i] = boundary_point(config_->leading_edge_t + kTwoPi * i / resolution);
  return pts;
}

// ---------------------------------------------------------------------------
// BoundaryGeometry

namespace {
// 5-point Gauss-Legendre on [0,1].
constexpr double kG5x[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                            0.76923465505284155, 0.95308992296933200};
constexpr double kG5w[5] = {0.11846344252809454, 0.23931433524968324,
                            0.28444444444444444, 0.23931433524968324,
                            0.11846344252809454};
}  // namespace

BoundaryGeometry boundary_geometry(const Shape& shape, int resolution) {
  if (resolution < 16)
    throw Error(ErrorCode::ConfigError, "boundary resolution must be >= 16");
  BoundaryGeometry bg;
  const double t0 = shape.leading_edge_t();
  const int n = resolution;
  bg.vertices.resize(n);
  bg.normals.resize(n);
  bg.params.resize(n);
  bg.cumulative_arclength.resize(n);
  bg.arclength_to_le.resize(n);
  bg.segment_tags.resize(n);

  for (int i = 0; i < n; ++i) {
    const double t = t0 + kTwoPi * i / n;
    bg.params[i] = t;
    bg.vertices[i] = shape.boundary_point(t);
    const Vec2 v = shape.boundary_d1(t);
    const Vec2 T = v.normalized();
    bg.normals[i] = Vec2{T.y, -T.x};
  }

  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    bg.cumulative_arclength[i] = s;
    const double ta = t0 + kTwoPi * i / n;
    const double dt = kTwoPi / n;
    double seg = 0.0;
    for (int q = 0; q < 5; ++q)
      seg += kG5w[q] * shape.boundary_d1(ta + kG5x[q] * dt).norm();
    s += seg * dt;
  }
  bg.perimeter = s;
  bg.arclength_to_le[0] = 0.0;  // exact at the marked vertex
  for (int i = 1; i < n; ++i) {
    const double a = bg.cumulative_arclength[i];
    bg.arclength_to_le[i] = std::min(a, bg.perimeter - a);
  }

  const auto& cfg = shape.config();
  for (int i = 0; i < n; ++i) {
    const double tm = t0 + kTwoPi * (i + 0.5) / n;
    const Vec2 mid = shape.boundary_point(tm);
    bg.segment_tags[i] = cfg.shroud.contains(mid) ? BoundaryTag::Component
                                                  : cfg.fixed_region_tag;
  }
  bg.leading_edge_index = 0;
  return bg;
}

void BoundaryGeometry::export_csv(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  out << "x,y,nx,ny,dist_LE,tag\n";
  for (int i = 0; i < size(); ++i) {
    const BoundaryTag tag = segment_tags[i];
    out << vertices[i].x << ',' << vertices[i].y << ',' << normals[i].x << ','
        << normals[i].y << ',' << arclength_to_le[i] << ',' << to_string(tag)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Hausdorff distance

namespace {
double directed_hausdorff(std::span<const Vec2> a, std::span<const Vec2> b) {
  double sup = 0.0;
  for (const Vec2& p : a) {
    double best = std::numeric_limits<double>::max();
    for (const Vec2& q : b) {
      const double d = (p - q).squared_norm();
      if (d < best) {
        best = d;
        if (best <= sup) break;  // cannot raise the supremum
      }
    }
    sup = std::max(sup, best);
  }
  return sup;
}
}  // namespace

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::EmptySet, "hausdorff_distance needs nonempty sets");
  return std::sqrt(std::max(directed_hausdorff(a, b), directed_hausdorff(b, a)));
}

double estimate_perimeter(const Shape& shape) {
  const int n = 1024;
  double s = 0.0;
  Vec2 prev = shape.boundary_point(0.0);
  for (int i = 1; i <= n; ++i) {
    const Vec2 cur = shape.boundary_point(kTwoPi * i / n);
    s += dist(prev, cur);
    prev = cur;
  }
  return s;
}

}  // namespace pflow
