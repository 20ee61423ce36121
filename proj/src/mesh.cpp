#include "pflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pflow/errors.hpp"

namespace pflow {

// ---------------------------------------------------------------------------
// Mesh helpers

double Mesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  const Vec2 a = nodes[tr[0]], b = nodes[tr[1]], c = nodes[tr[2]];
  return 0.5 * (b - a).cross(c - a);
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < n_triangles(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::longest_edge(int t) const {
  const auto& tr = triangles[t];
  double m = 0.0;
  for (int e = 0; e < 3; ++e)
    m = std::max(m, dist(nodes[tr[e]], nodes[tr[(e + 1) % 3]]));
  return m;
}

double Mesh::min_angle_deg() const {
  double worst = 180.0;
  for (const auto& tr : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = nodes[tr[(i + 1) % 3]] - nodes[tr[i]];
      const Vec2 v = nodes[tr[(i + 2) % 3]] - nodes[tr[i]];
      const double ang =
          std::atan2(std::abs(u.cross(v)), u.dot(v)) * 180.0 / kPi;
      worst = std::min(worst, ang);
    }
  }
  return worst;
}

int Mesh::euler_characteristic() const {
  std::unordered_map<std::uint64_t, int> edges;
  auto key = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };
  for (const auto& tr : triangles)
    for (int e = 0; e < 3; ++e) edges[key(tr[e], tr[(e + 1) % 3])] = 1;
  std::vector<char> used(nodes.size(), 0);
  for (const auto& tr : triangles)
    for (int v : tr) used[v] = 1;
  int nv = 0;
  for (char u : used) nv += u;
  return nv - static_cast<int>(edges.size()) + n_triangles();
}

bool Mesh::has_tag(BoundaryTag t) const {
  for (const auto& e : boundary_edges)
    if (e.tag == t) return true;
  return false;
}

void Pslg::add_loop(std::vector<Vec2> pts, BoundaryTag tag) {
  loop_tags.push_back(std::vector<BoundaryTag>(pts.size(), tag));
  loops.push_back(std::move(pts));
}

void Pslg::add_loop(std::vector<Vec2> pts, std::vector<BoundaryTag> tags) {
  if (tags.size() != pts.size())
    throw Error(ErrorCode::ConfigError, "loop tags must match segment count");
  loops.push_back(std::move(pts));
  loop_tags.push_back(std::move(tags));
}

// ---------------------------------------------------------------------------
// Point-in-region query with even-odd rule over all loops, x-binned edges.

namespace {

class PolygonLocator {
 public:
  explicit PolygonLocator(const std::vector<std::vector<Vec2>>& loops) {
    double x0 = std::numeric_limits<double>::max(), x1 = -x0;
    for (const auto& loop : loops)
      for (const auto& p : loop) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
      }
    x0_ = x0;
    scale_ = (x1 > x0) ? kBins / (x1 - x0) : 0.0;
    bins_.resize(kBins + 1);
    for (const auto& loop : loops) {
      const int n = static_cast<int>(loop.size());
      for (int i = 0; i < n; ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % n];
        int ba = bin(std::min(a.x, b.x));
        int bb = bin(std::max(a.x, b.x));
        for (int k = ba; k <= bb; ++k) bins_[k].push_back({a, b});
      }
    }
  }

  bool inside(const Vec2& p) const {
    int crossings = 0;
    for (const auto& [a, b] : bins_[bin(p.x)]) {
      if ((a.x > p.x) == (b.x > p.x)) continue;
      const double y = a.y + (p.x - a.x) / (b.x - a.x) * (b.y - a.y);
      if (y > p.y) ++crossings;
    }
    return crossings % 2 == 1;
  }

 private:
  static constexpr int kBins = 128;
  double x0_ = 0.0, scale_ = 0.0;
  std::vector<std::vector<std::pair<Vec2, Vec2>>> bins_;
  int bin(double x) const {
    int k = static_cast<int>((x - x0_) * scale_);
    return std::clamp(k, 0, kBins);
  }
};

// ---------------------------------------------------------------------------
// Bowyer-Watson triangulation with constrained segments.

struct SegInfo {
  BoundaryTag tag = BoundaryTag::Wall;
};

inline std::uint64_t seg_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

class Triangulator {
 public:
  Triangulator(const Pslg& pslg, const MeshOptions& opts)
      : opts_(opts), locator_(pslg.loops) {
    gather_input(pslg);
    build_super_rect();
    for (std::size_t i = 0; i < input_points_.size(); ++i)
      point_ids_.push_back(insert_point(input_points_[i], -1));
    for (const auto& [a, b, tag] : input_segments_)
      segments_[seg_key(point_ids_[a], point_ids_[b])] = SegInfo{tag};
    enforce_conformity();
    refine();
    check_quality();
  }

  Mesh extract();

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nb{};  // neighbor across edge (v[i+1], v[i+2])
    bool alive = true;
  };

  MeshOptions opts_;
  PolygonLocator locator_;
  std::vector<Vec2> input_points_;
  std::vector<std::tuple<int, int, BoundaryTag>> input_segments_;
  std::vector<int> point_ids_;

  std::vector<Vec2> verts_;
  std::vector<Tri> tris_;
  std::map<std::uint64_t, SegInfo> segments_;
  std::deque<int> bad_queue_;
  int last_alive_ = 0;
  double scale_ = 1.0;

  void gather_input(const Pslg& pslg) {
    for (std::size_t li = 0; li < pslg.loops.size(); ++li) {
      const auto& loop = pslg.loops[li];
      const auto& tags = pslg.loop_tags[li];
      const int base = static_cast<int>(input_points_.size());
      const int n = static_cast<int>(loop.size());
      if (n < 3) throw Error(ErrorCode::MeshFailure, "degenerate loop");
      for (int i = 0; i < n; ++i) {
        if (dist(loop[i], loop[(i + 1) % n]) < 1e-13)
          throw Error(ErrorCode::MeshFailure, "duplicate loop points");
        input_points_.push_back(loop[i]);
      }
      for (int i = 0; i < n; ++i)
        input_segments_.emplace_back(base + i, base + (i + 1) % n, tags[i]);
    }
  }

  void build_super_rect() {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& p : input_points_) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    const double w = std::max(x1 - x0, y1 - y0);
    scale_ = w;
    const double m = 2.0 * w + 1.0;
    verts_ = {{x0 - m, y0 - m}, {x1 + m, y0 - m}, {x1 + m, y1 + m}, {x0 - m, y1 + m}};
    tris_.push_back(Tri{{0, 1, 2}, {-1, 1, -1}, true});
    tris_.push_back(Tri{{0, 2, 3}, {-1, -1, 0}, true});
  }

  static double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).cross(c - a);
  }

  bool in_circumcircle(const Tri& t, const Vec2& p) const {
    const Vec2 a = verts_[t.v[0]], b = verts_[t.v[1]], c = verts_[t.v[2]];
    const double ax = a.x - p.x, ay = a.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double cx = c.x - p.x, cy = c.y - p.y;
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    return det > 1e-13 * scale_ * scale_ * scale_ * scale_;
  }

  bool is_constrained(int a, int b) const {
    return segments_.count(seg_key(a, b)) > 0;
  }

  int locate(const Vec2& p, int hint) const {
    int t = (hint >= 0 && hint < static_cast<int>(tris_.size()) &&
             tris_[hint].alive)
                ? hint
                : first_alive();
    int steps = 0;
    const int cap = static_cast<int>(tris_.size()) * 2 + 64;
    while (steps++ < cap) {
      const Tri& tr = tris_[t];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        const Vec2& a = verts_[tr.v[(e + 1) % 3]];
        const Vec2& b = verts_[tr.v[(e + 2) % 3]];
        if (orient(a, b, p) < -1e-14 * scale_ * scale_) {
          next = tr.nb[e];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // Walk cycled (degenerate orientation); fall back to a scan.
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (!tris_[i].alive) continue;
      const Tri& tr = tris_[i];
      bool ok = true;
      for (int e = 0; e < 3 && ok; ++e)
        ok = orient(verts_[tr.v[(e + 1) % 3]], verts_[tr.v[(e + 2) % 3]], p) >=
             -1e-12 * scale_ * scale_;
      if (ok) return i;
    }
    throw Error(ErrorCode::MeshFailure, "point location failed");
  }

  int first_alive() const {
    for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
      if (tris_[i].alive) return i;
    throw Error(ErrorCode::MeshFailure, "triangulation is empty");
  }

  // Inserts p and returns its vertex id; an existing vertex id is returned
  // when p coincides with one.
  int insert_point(const Vec2& p, int hint) {
    if (static_cast<int>(verts_.size()) > opts_.max_vertices)
      throw Error(ErrorCode::MeshFailure,
                  "refinement exceeded the vertex budget");
    const int start = locate(p, hint);
    for (int v : tris_[start].v)
      if ((verts_[v] - p).squared_norm() < 1e-26 * scale_ * scale_) return v;

    // Grow the cavity of circumcircle violations, never crossing constraints.
    std::vector<int> cavity;
    std::vector<char> in_cavity(tris_.size(), 0);
    std::deque<int> work{start};
    in_cavity[start] = 1;
    while (!work.empty()) {
      const int t = work.front();
      work.pop_front();
      cavity.push_back(t);
      const Tri& tr = tris_[t];
      for (int e = 0; e < 3; ++e) {
        const int n = tr.nb[e];
        if (n < 0 || in_cavity[n]) continue;
        if (is_constrained(tr.v[(e + 1) % 3], tr.v[(e + 2) % 3])) continue;
        if (in_circumcircle(tris_[n], p)) {
          in_cavity[n] = 1;
          work.push_back(n);
        }
      }
    }

    // Star-shape fix-up: every cavity boundary edge must see p positively;
    // absorb neighbors where it does not (handles cocircular ties and points
    // landing exactly on an edge).
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t ci = 0; ci < cavity.size() && !grew; ++ci) {
        const Tri& tr = tris_[cavity[ci]];
        for (int e = 0; e < 3; ++e) {
          const int n = tr.nb[e];
          if (n >= 0 && in_cavity[n]) continue;
          const int va = tr.v[(e + 1) % 3], vb = tr.v[(e + 2) % 3];
          if (orient(verts_[va], verts_[vb], p) > 1e-14 * scale_ * scale_)
            continue;
          if (n < 0 || is_constrained(va, vb))
            throw Error(ErrorCode::MeshFailure,
                        "new vertex falls on a constrained edge or hull");
          in_cavity[n] = 1;
          cavity.push_back(n);
          grew = true;
          break;
        }
      }
    }

    const int pid = static_cast<int>(verts_.size());
    verts_.push_back(p);

    // Collect boundary edges (va, vb, outside-neighbor).
    struct BEdge {
      int va, vb, outside;
    };
    std::vector<BEdge> boundary;
    for (int t : cavity) {
      const Tri& tr = tris_[t];
      for (int e = 0; e < 3; ++e) {
        const int n = tr.nb[e];
        if (n >= 0 && in_cavity[n]) continue;
        boundary.push_back({tr.v[(e + 1) % 3], tr.v[(e + 2) % 3], n});
      }
    }
    for (int t : cavity) tris_[t].alive = false;

    // Fan retriangulation, stitching adjacency through an edge map.
    std::unordered_map<std::uint64_t, std::pair<int, int>> open_edges;
    std::vector<int> fresh;
    for (const auto& be : boundary) {
      Tri nt;
      nt.v = {be.va, be.vb, pid};
      nt.nb = {-1, -1, be.outside};
      const int id = static_cast<int>(tris_.size());
      tris_.push_back(nt);
      fresh.push_back(id);
      if (be.outside >= 0) {
        Tri& out = tris_[be.outside];
        for (int e = 0; e < 3; ++e)
          if ((out.v[(e + 1) % 3] == be.vb && out.v[(e + 2) % 3] == be.va))
            out.nb[e] = id;
      }
      for (int side = 0; side < 2; ++side) {
        const int u = side == 0 ? be.va : be.vb;
        auto it = open_edges.find(seg_key(u, pid));
        if (it == open_edges.end()) {
          open_edges[seg_key(u, pid)] = {id, side == 0 ? 1 : 0};
        } else {
          const auto [oid, oedge] = it->second;
          tris_[id].nb[side == 0 ? 1 : 0] = oid;
          tris_[oid].nb[oedge] = id;
        }
      }
    }

    for (int id : fresh) bad_queue_.push_back(id);
    last_alive_ = fresh.empty() ? last_alive_ : fresh.back();
    return pid;
  }

  bool encroached(int a, int b, const Vec2& q) const {
    // Strictly inside the diametral circle of (a, b).
    const Vec2 pa = verts_[a] - q, pb = verts_[b] - q;
    return pa.dot(pb) < -1e-14 * scale_ * scale_;
  }

  // Splits segment (a,b) at its midpoint; returns the new vertex id.
  int split_segment(std::uint64_t key) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    const SegInfo info = segments_.at(key);
    segments_.erase(key);  // removed before carving so the cavity may cross it
    const Vec2 mid = 0.5 * (verts_[a] + verts_[b]);
    const int pid = insert_point(mid, last_alive_);
    segments_[seg_key(a, pid)] = info;
    segments_[seg_key(pid, b)] = info;
    return pid;
  }

  // Edge -> adjacent alive triangles map, rebuilt on demand.
  std::unordered_map<std::uint64_t, std::array<int, 2>> edge_map() const {
    std::unordered_map<std::uint64_t, std::array<int, 2>> m;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      if (!tris_[t].alive) continue;
      for (int e = 0; e < 3; ++e) {
        const auto k = seg_key(tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3]);
        auto it = m.find(k);
        if (it == m.end())
          m[k] = {t, -1};
        else
          it->second[1] = t;
      }
    }
    return m;
  }

  void enforce_conformity() {
    for (int pass = 0; pass < 200; ++pass) {
      auto edges = edge_map();
      std::vector<std::uint64_t> to_split;
      for (const auto& [key, info] : segments_) {
        (void)info;
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        auto it = edges.find(key);
        if (it == edges.end()) {
          to_split.push_back(key);
          continue;
        }
        for (int t : it->second) {
          if (t < 0) continue;
          for (int v : tris_[t].v)
            if (v != a && v != b && encroached(a, b, verts_[v])) {
              to_split.push_back(key);
              t = -1;
              break;
            }
          if (t == -1) break;
        }
      }
      if (to_split.empty()) return;
      for (const auto key : to_split)
        if (segments_.count(key)) split_segment(key);
    }
    throw Error(ErrorCode::MeshFailure, "segment conformity did not converge");
  }

  bool triangle_in_region(const Tri& t) const {
    const Vec2 c = (verts_[t.v[0]] + verts_[t.v[1]] + verts_[t.v[2]]) / 3.0;
    return locator_.inside(c);
  }

  bool is_bad(const Tri& t) const {
    const Vec2 a = verts_[t.v[0]], b = verts_[t.v[1]], c = verts_[t.v[2]];
    if (dist(a, b) > opts_.h || dist(b, c) > opts_.h || dist(c, a) > opts_.h)
      return true;
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = verts_[t.v[(i + 1) % 3]] - verts_[t.v[i]];
      const Vec2 v = verts_[t.v[(i + 2) % 3]] - verts_[t.v[i]];
      const double ang = std::atan2(std::abs(u.cross(v)), u.dot(v));
      if (ang < (opts_.min_angle_deg - 1e-9) * kPi / 180.0) return true;
    }
    return false;
  }

  Vec2 circumcenter(const Tri& t) const {
    const Vec2 a = verts_[t.v[0]], b = verts_[t.v[1]], c = verts_[t.v[2]];
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * ab.cross(ac);
    const double ab2 = ab.squared_norm(), ac2 = ac.squared_norm();
    return {a.x + (ac.y * ab2 - ab.y * ac2) / d,
            a.y + (ab.x * ac2 - ac.x * ab2) / d};
  }

  void refine() {
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      if (tris_[t].alive) bad_queue_.push_back(t);
    while (!bad_queue_.empty()) {
      const int t = bad_queue_.front();
      bad_queue_.pop_front();
      if (t >= static_cast<int>(tris_.size()) || !tris_[t].alive) continue;
      if (!triangle_in_region(tris_[t])) continue;
      if (!is_bad(tris_[t])) continue;
      const Vec2 cc = circumcenter(tris_[t]);

      // Ruppert rule: a circumcenter that encroaches segments splits them
      // instead of being inserted.
      std::vector<std::uint64_t> hit;
      for (const auto& [key, info] : segments_) {
        (void)info;
        if (encroached(static_cast<int>(key >> 32),
                       static_cast<int>(key & 0xffffffffu), cc))
          hit.push_back(key);
      }
      if (!hit.empty()) {
        for (const auto key : hit)
          if (segments_.count(key)) split_segment(key);
        bad_queue_.push_back(t);  // may still be bad afterwards
        continue;
      }
      insert_point(cc, t);
    }
  }

  void check_quality() {
    // Conformity may have been disturbed by late splits; do a final sweep.
    auto edges = edge_map();
    for (const auto& [key, info] : segments_) {
      (void)info;
      if (edges.find(key) == edges.end())
        throw Error(ErrorCode::MeshFailure,
                    "constrained segment missing from final mesh");
    }
    for (const auto& t : tris_)
      if (t.alive && triangle_in_region(t) && is_bad(t))
        throw Error(ErrorCode::MeshFailure,
                    "refinement left a bad triangle in the region");
  }
};

Mesh Triangulator::extract() {
  Mesh mesh;
  std::vector<int> remap(verts_.size(), -1);
  auto edges = edge_map();

  for (const auto& t : tris_) {
    if (!t.alive || !triangle_in_region(t)) continue;
    std::array<int, 3> tri{};
    for (int i = 0; i < 3; ++i) {
      const int v = t.v[i];
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(verts_[v]);
      }
      tri[i] = remap[v];
    }
    if (orient(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]) < 0)
      std::swap(tri[1], tri[2]);
    mesh.triangles.push_back(tri);
  }
  if (mesh.triangles.empty())
    throw Error(ErrorCode::MeshFailure, "no triangles inside the region");

  for (const auto& [key, info] : segments_) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    auto it = edges.find(key);
    if (it == edges.end()) continue;
    int inside_tri = -1;
    int n_inside = 0;
    for (int t : it->second)
      if (t >= 0 && triangle_in_region(tris_[t])) {
        inside_tri = t;
        ++n_inside;
      }
    if (n_inside != 1) continue;  // interior constraint or fully outside
    // Orient so the region lies to the left.
    const Tri& tr = tris_[inside_tri];
    int va = a, vb = b;
    for (int e = 0; e < 3; ++e) {
      const int u = tr.v[(e + 1) % 3], w = tr.v[(e + 2) % 3];
      if ((u == a && w == b) || (u == b && w == a)) {
        va = u;
        vb = w;
        break;
      }
    }
    mesh.boundary_edges.push_back({remap[va], remap[vb], info.tag});
  }

  mesh.h_max = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    mesh.h_max = std::max(mesh.h_max, mesh.longest_edge(t));
  return mesh;
}

}  // namespace

Mesh triangulate(const Pslg& pslg, const MeshOptions& opts) {
  Triangulator tr(pslg, opts);
  return tr.extract();
}

// ---------------------------------------------------------------------------
// Domain-specific mesh builders

int boundary_resolution_for(double perimeter, double h) {
  const int n = static_cast<int>(std::ceil(perimeter / (0.72 * h)));
  return std::max(n, 32);
}

namespace {

// Counterclockwise polyline of the shroud rectangle with rounded corners,
// sampled at roughly `spacing`, starting at the southwest corner. Returns
// points and a tag per outgoing segment.
void shroud_polyline(const Rect& box, double spacing, double rounding,
                     std::vector<Vec2>& pts, std::vector<BoundaryTag>& tags) {
  const double r = std::min({rounding, 0.33 * box.width(), 0.33 * box.height()});
  struct Side {
    Vec2 a, b;
    BoundaryTag tag;
  };
  const Side sides[4] = {
      {{box.x0, box.y0}, {box.x1, box.y0}, BoundaryTag::Wall},
      {{box.x1, box.y0}, {box.x1, box.y1}, BoundaryTag::Outlet},
      {{box.x1, box.y1}, {box.x0, box.y1}, BoundaryTag::Wall},
      {{box.x0, box.y1}, {box.x0, box.y0}, BoundaryTag::Inlet},
  };
  for (int s = 0; s < 4; ++s) {
    const Vec2 dir = (sides[s].b - sides[s].a).normalized();
    const Vec2 a = sides[s].a + dir * r;
    const Vec2 b = sides[s].b - dir * r;
    const double len = dist(a, b);
    const int n = std::max(1, static_cast<int>(std::round(len / spacing)));
    for (int i = 0; i < n; ++i) {
      pts.push_back(a + dir * (len * i / n));
      tags.push_back(sides[s].tag);
    }
    if (r > 0.0) {
      // Corner arc between this side and the next, tagged wall.
      const Vec2 corner = sides[s].b;
      const Vec2 next_dir = (sides[(s + 1) % 4].b - sides[(s + 1) % 4].a).normalized();
      const Vec2 center = corner - dir * r + next_dir * r;
      const double a0 = std::atan2((b - center).y, (b - center).x);
      double a1 = std::atan2((corner + next_dir * r - center).y,
                             (corner + next_dir * r - center).x);
      while (a1 < a0) a1 += kTwoPi;
      const int na = std::max(2, static_cast<int>(std::round(r * (a1 - a0) / spacing)));
      for (int i = 0; i < na; ++i) {
        const double ang = a0 + (a1 - a0) * i / na;
        pts.push_back({center.x + r * std::cos(ang), center.y + r * std::sin(ang)});
        tags.push_back(BoundaryTag::Wall);
      }
    }
  }
}

struct WettedChain {
  std::vector<Vec2> points;  // ordered by increasing curve parameter
  std::vector<double> params;
  bool closed = false;  // true when the whole boundary is wetted
};

// Wetted part of the shape boundary as an open chain from the downstream to
// the upstream junction (or the full closed boundary when immersed).
// All interior points are BoundaryGeometry vertices.
WettedChain wetted_chain(const Shape& shape, const BoundaryGeometry& bg) {
  WettedChain chain;
  const auto arc = shape.config().wetted_arc();
  if (arc.full_boundary) {
    chain.closed = true;
    chain.points = bg.vertices;
    chain.params = bg.params;
    return chain;
  }
  const Vec2 j0 = shape.boundary_point(arc.t_begin);
  const Vec2 j1 = shape.boundary_point(arc.t_end);
  const double spacing = bg.perimeter / bg.size();
  std::vector<std::pair<double, Vec2>> interior;
  for (int i = 0; i < bg.size(); ++i) {
    double t = bg.params[i] - arc.t_begin;
    t -= std::floor(t / kTwoPi) * kTwoPi;  // into [0, 2*pi)
    t += arc.t_begin;
    if (t <= arc.t_begin + 1e-12 || t >= arc.t_end - 1e-12) continue;
    const Vec2 p = bg.vertices[i];
    if (dist(p, j0) < 0.45 * spacing || dist(p, j1) < 0.45 * spacing)
      continue;  // avoid slivers against the junction vertices
    interior.emplace_back(t, p);
  }
  std::sort(interior.begin(), interior.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  chain.points.push_back(j0);
  chain.params.push_back(arc.t_begin);
  for (const auto& [t, p] : interior) {
    chain.points.push_back(p);
    chain.params.push_back(t);
  }
  chain.points.push_back(j1);
  chain.params.push_back(arc.t_end);
  return chain;
}

// Reverses a tagged loop, keeping tags attached to their segments.
void reverse_loop(std::vector<Vec2>& pts, std::vector<BoundaryTag>& tags) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec2> rp(n);
  std::vector<BoundaryTag> rt(n);
  for (int j = 0; j < n; ++j) rp[j] = pts[n - 1 - j];
  for (int j = 0; j < n; ++j) rt[j] = tags[(2 * n - 2 - j) % n];
  pts = std::move(rp);
  tags = std::move(rt);
}

double signed_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) s += poly[i].cross(poly[(i + 1) % n]);
  return 0.5 * s;
}

}  // namespace

Mesh mesh_fluid(const Shape& shape, const BoundaryGeometry& bg,
                const FluidMeshOptions& opts) {
  if (opts.h <= 0.0) throw Error(ErrorCode::ConfigError, "mesh size h must be positive");
  const Rect& box = shape.config().shroud;
  const double rounding = opts.corner_rounding < 0.0 ? 2.0 * opts.h
                                                     : opts.corner_rounding;
  const double wall_spacing = 0.85 * opts.h;

  std::vector<Vec2> rect_pts;
  std::vector<BoundaryTag> rect_tags;
  shroud_polyline(box, wall_spacing, rounding, rect_pts, rect_tags);

  const auto arc = shape.config().wetted_arc();
  Pslg pslg;
  if (arc.full_boundary) {
    pslg.add_loop(rect_pts, rect_tags);
    WettedChain chain = wetted_chain(shape, bg);
    std::vector<Vec2> hole = chain.points;
    if (signed_area(hole) < 0.0) std::reverse(hole.begin(), hole.end());
    pslg.add_loop(hole, BoundaryTag::Component);
    // Seed inside the component: average of boundary points works for the
    // star-shaped components in this family.
    Vec2 seed{0.0, 0.0};
    for (const auto& p : hole) seed += p;
    pslg.hole_seeds.push_back(seed / static_cast<double>(hole.size()));
  } else {
    // Splice the wetted chain into the shroud loop: drop shroud points inside
    // the component, insert the chain (reversed: the fluid boundary traverses
    // the component from the upstream junction back to the downstream one).
    WettedChain chain = wetted_chain(shape, bg);
    std::vector<Vec2> loop;
    std::vector<BoundaryTag> tags;
    const int n = static_cast<int>(rect_pts.size());
    const Vec2 j_first = chain.points.front();   // downstream junction
    const Vec2 j_last = chain.points.back();     // upstream junction
    auto inside_component = [&](const Vec2& p) {
      const double t = shape.config().baseline.closest_parameter(p);
      const Vec2 q = shape.boundary_point(t);
      const Vec2 nrm = shape.config().baseline.outward_normal(t);
      return (p - q).dot(nrm) < 0.0;
    };
    const double drop_radius = 0.45 * wall_spacing;
    bool spliced = false;
    for (int i = 0; i < n; ++i) {
      const Vec2& p = rect_pts[i];
      const bool in_comp = inside_component(p) ||
                           dist(p, j_first) < drop_radius ||
                           dist(p, j_last) < drop_radius;
      if (!in_comp) {
        loop.push_back(p);
        tags.push_back(rect_tags[i]);
        continue;
      }
      if (spliced) continue;
      spliced = true;
      // Walk the chain so that the fluid region stays on the left: enter at
      // the junction nearer the previous kept point.
      std::vector<Vec2> cpts = chain.points;
      const Vec2 prev = loop.empty() ? rect_pts[(i - 1 + n) % n] : loop.back();
      if (dist(prev, cpts.back()) < dist(prev, cpts.front()))
        std::reverse(cpts.begin(), cpts.end());
      for (std::size_t k = 0; k + 1 < cpts.size(); ++k) {
        loop.push_back(cpts[k]);
        tags.push_back(BoundaryTag::Component);
      }
      loop.push_back(cpts.back());
      tags.push_back(rect_tags[i]);  // segment leaving the last junction
    }
    if (!spliced)
      throw Error(ErrorCode::MeshFailure,
                  "component does not intersect the shroud boundary");
    pslg.add_loop(loop, tags);
  }

  MeshOptions mo;
  mo.h = opts.h;
  Mesh mesh = triangulate(pslg, mo);
  mesh.region = MeshRegion::Fluid;
  return mesh;
}

Mesh mesh_fluid(const Shape& shape, double h) {
  BoundaryGeometry bg = boundary_geometry(
      shape, boundary_resolution_for(estimate_perimeter(shape), h));
  FluidMeshOptions opts;
  opts.h = h;
  return mesh_fluid(shape, bg, opts);
}

Mesh mesh_solid(const Shape& shape, const BoundaryGeometry& bg, double h) {
  if (h <= 0.0) throw Error(ErrorCode::ConfigError, "mesh size h must be positive");
  const ClampDisc& clamp = shape.config().clamp;

  std::vector<Vec2> outer = bg.vertices;
  std::vector<BoundaryTag> tags = bg.segment_tags;
  if (signed_area(outer) < 0.0) reverse_loop(outer, tags);

  const int nc = std::max(
      16, static_cast<int>(std::ceil(kTwoPi * clamp.radius / (0.72 * h))));
  std::vector<Vec2> hole(nc);
  for (int i = 0; i < nc; ++i) {
    const double a = kTwoPi * i / nc;
    hole[i] = {clamp.center.x + clamp.radius * std::cos(a),
               clamp.center.y + clamp.radius * std::sin(a)};
  }
  // Clamp disc must stay clear of the outer boundary.
  for (const auto& q : hole)
    for (const auto& p : outer)
      if (dist(p, q) < 0.3 * h)
        throw Error(ErrorCode::MeshFailure,
                    "clamp disc overlaps the component boundary");

  Pslg pslg;
  pslg.add_loop(outer, tags);
  pslg.add_loop(hole, BoundaryTag::Clamp);
  pslg.hole_seeds.push_back(clamp.center);

  MeshOptions mo;
  mo.h = h;
  Mesh mesh = triangulate(pslg, mo);
  mesh.region = MeshRegion::Solid;
  if (!mesh.has_tag(BoundaryTag::Clamp))
    throw Error(ErrorCode::MeshFailure, "solid mesh lost its clamp boundary");
  return mesh;
}

Mesh mesh_solid(const Shape& shape, double h) {
  BoundaryGeometry bg = boundary_geometry(
      shape, boundary_resolution_for(estimate_perimeter(shape), h));
  return mesh_solid(shape, bg, h);
}

Mesh mesh_component(const Shape& shape, const BoundaryGeometry& bg, double h) {
  (void)shape;
  std::vector<Vec2> outer = bg.vertices;
  std::vector<BoundaryTag> tags = bg.segment_tags;
  if (signed_area(outer) < 0.0) reverse_loop(outer, tags);
  Pslg pslg;
  pslg.add_loop(outer, tags);
  MeshOptions mo;
  mo.h = h;
  Mesh mesh = triangulate(pslg, mo);
  mesh.region = MeshRegion::Solid;
  return mesh;
}

Mesh mesh_channel(const Rect& box, double h, double corner_rounding) {
  std::vector<Vec2> pts;
  std::vector<BoundaryTag> tags;
  shroud_polyline(box, 0.85 * h, corner_rounding, pts, tags);
  Pslg pslg;
  pslg.add_loop(pts, tags);
  MeshOptions mo;
  mo.h = h;
  Mesh mesh = triangulate(pslg, mo);
  mesh.region = MeshRegion::Fluid;
  return mesh;
}

// ---------------------------------------------------------------------------
// Text format: node count, "x y" lines, triangle count, "i j k" lines,
// boundary edge count, "i j tag" lines.

void save_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  out.precision(17);
  out << mesh.n_nodes() << '\n';
  for (const auto& p : mesh.nodes) out << p.x << ' ' << p.y << '\n';
  out << mesh.n_triangles() << '\n';
  for (const auto& t : mesh.triangles)
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << mesh.boundary_edges.size() << '\n';
  for (const auto& e : mesh.boundary_edges)
    out << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  Mesh mesh;
  int n = 0;
  in >> n;
  mesh.nodes.resize(n);
  for (auto& p : mesh.nodes) in >> p.x >> p.y;
  in >> n;
  mesh.triangles.resize(n);
  for (auto& t : mesh.triangles) in >> t[0] >> t[1] >> t[2];
  in >> n;
  mesh.boundary_edges.resize(n);
  for (auto& e : mesh.boundary_edges) {
    std::string tag;
    in >> e.a >> e.b >> tag;
    e.tag = boundary_tag_from_string(tag);
  }
  if (!in) throw Error(ErrorCode::ConfigError, "malformed mesh file " + path);
  for (int t = 0; t < mesh.n_triangles(); ++t)
    mesh.h_max = std::max(mesh.h_max, mesh.longest_edge(t));
  return mesh;
}

}  // namespace pflow
