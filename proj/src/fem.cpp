#include "pflow/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "pflow/errors.hpp"

namespace pflow {

namespace {
inline std::uint64_t ukey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}
}  // namespace

P2Space P2Space::build(const Mesh& mesh) {
  P2Space sp;
  sp.mesh = &mesh;
  sp.nodes = mesh.nodes;
  sp.n_vertex_nodes = mesh.n_nodes();
  std::unordered_map<std::uint64_t, int> midpoint;
  auto mid_node = [&](int a, int b) {
    const auto k = ukey(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(sp.nodes.size());
    sp.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    midpoint[k] = id;
    return id;
  };
  sp.elem_dofs.resize(mesh.n_triangles());
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const auto& t = mesh.triangles[e];
    sp.elem_dofs[e] = {t[0],
                       t[1],
                       t[2],
                       mid_node(t[1], t[2]),
                       mid_node(t[2], t[0]),
                       mid_node(t[0], t[1])};
  }
  sp.bedge_dofs.resize(mesh.boundary_edges.size());
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    const auto& be = mesh.boundary_edges[k];
    sp.bedge_dofs[k] = {be.a, be.b, mid_node(be.a, be.b)};
  }
  return sp;
}

void p2_basis(const double l[3], double N[6]) {
  N[0] = l[0] * (2.0 * l[0] - 1.0);
  N[1] = l[1] * (2.0 * l[1] - 1.0);
  N[2] = l[2] * (2.0 * l[2] - 1.0);
  N[3] = 4.0 * l[1] * l[2];
  N[4] = 4.0 * l[2] * l[0];
  N[5] = 4.0 * l[0] * l[1];
}

double element_area(const P2Space& space, int elem) {
  return space.mesh->triangle_area(elem);
}

void p2_grad(const P2Space& space, int elem, const double l[3], Vec2 g[6]) {
  const auto& t = space.mesh->triangles[elem];
  const Vec2 p0 = space.mesh->nodes[t[0]];
  const Vec2 p1 = space.mesh->nodes[t[1]];
  const Vec2 p2 = space.mesh->nodes[t[2]];
  const double inv2A = 1.0 / ((p1 - p0).cross(p2 - p0));
  const Vec2 gl[3] = {(p2 - p1).perp() * inv2A, (p0 - p2).perp() * inv2A,
                      (p1 - p0).perp() * inv2A};
  for (int i = 0; i < 3; ++i) g[i] = gl[i] * (4.0 * l[i] - 1.0);
  g[3] = 4.0 * (gl[1] * l[2] + gl[2] * l[1]);
  g[4] = 4.0 * (gl[2] * l[0] + gl[0] * l[2]);
  g[5] = 4.0 * (gl[0] * l[1] + gl[1] * l[0]);
}

double Field::eval(int elem, const double lambda[3], int c) const {
  double N[6];
  p2_basis(lambda, N);
  const auto& dofs = space->elem_dofs[elem];
  double v = 0.0;
  for (int i = 0; i < 6; ++i) v += N[i] * value(dofs[i], c);
  return v;
}

Vec2 Field::eval_grad(int elem, const double lambda[3], int c) const {
  Vec2 g[6];
  p2_grad(*space, elem, lambda, g);
  const auto& dofs = space->elem_dofs[elem];
  Vec2 v{0.0, 0.0};
  for (int i = 0; i < 6; ++i) v += g[i] * value(dofs[i], c);
  return v;
}

const TriQuadrature& tri_rule_3() {
  static const TriQuadrature q = [] {
    TriQuadrature r;
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    r.points = {{{a, b, b}}, {{b, a, b}}, {{b, b, a}}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
  }();
  return q;
}

const TriQuadrature& tri_rule_7() {
  static const TriQuadrature q = [] {
    TriQuadrature r;
    const double a = 0.05971587178976982, b = 0.47014206410511508;
    const double c = 0.79742698535308731, d = 0.10128650732345634;
    const double w1 = 0.225, w2 = 0.13239415278850618, w3 = 0.12593918054482715;
    r.points = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
                {{a, b, b}},
                {{b, a, b}},
                {{b, b, a}},
                {{c, d, d}},
                {{d, c, d}},
                {{d, d, c}}};
    r.weights = {w1, w2, w2, w2, w3, w3, w3};
    return r;
  }();
  return q;
}

const EdgeQuadrature& edge_rule_3() {
  static const EdgeQuadrature q = [] {
    EdgeQuadrature r;
    const double s = 0.5 * std::sqrt(3.0 / 5.0);
    r.points = {0.5 - s, 0.5, 0.5 + s};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return q;
}

// ---------------------------------------------------------------------------
// Superconvergent patch recovery

namespace {

struct PatchFit {
  // Polynomial coefficients over centered, scaled coordinates; degree 2, 1 or
  // 0 depending on how many samples the patch offers.
  Vec2 center;
  double scale = 1.0;
  int n_basis = 6;
  std::vector<Eigen::VectorXd> coeffs;  // one per component

  double eval(const Vec2& p, int c) const {
    const double x = (p.x - center.x) / scale;
    const double y = (p.y - center.y) / scale;
    const double phi[6] = {1.0, x, y, x * x, x * y, y * y};
    double v = 0.0;
    for (int i = 0; i < n_basis; ++i) v += coeffs[c](i) * phi[i];
    return v;
  }
};

}  // namespace

std::vector<double> spr_recover(const P2Space& space,
                                const std::vector<std::vector<double>>& samples,
                                int ncomp) {
  const Mesh& mesh = *space.mesh;
  const auto& rule = tri_rule_3();
  const int nv = mesh.n_nodes();

  std::vector<std::vector<int>> v2e(nv);
  for (int e = 0; e < mesh.n_triangles(); ++e)
    for (int v : mesh.triangles[e]) v2e[v].push_back(e);

  std::vector<PatchFit> fits(nv);
  std::vector<int> patch;
  std::vector<char> in_patch(mesh.n_triangles(), 0);
  for (int v = 0; v < nv; ++v) {
    patch = v2e[v];
    if (patch.size() < 3) {  // grow one ring at boundary corners
      for (int e : v2e[v])
        for (int w : mesh.triangles[e])
          for (int e2 : v2e[w]) patch.push_back(e2);
      std::sort(patch.begin(), patch.end());
      patch.erase(std::unique(patch.begin(), patch.end()), patch.end());
    }
    for (int e : patch) in_patch[e] = 1;

    // Gather sample points of the patch.
    std::vector<Vec2> pts;
    std::vector<const double*> vals;
    for (int e : patch) {
      const auto& t = mesh.triangles[e];
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        pts.push_back(mesh.nodes[t[0]] * l[0] + mesh.nodes[t[1]] * l[1] +
                      mesh.nodes[t[2]] * l[2]);
        vals.push_back(samples[e * 3 + q].data());
      }
    }
    for (int e : patch) in_patch[e] = 0;

    PatchFit& fit = fits[v];
    fit.center = mesh.nodes[v];
    double sc = 0.0;
    for (const auto& p : pts) sc = std::max(sc, dist(p, fit.center));
    fit.scale = sc > 0.0 ? sc : 1.0;
    const int m = static_cast<int>(pts.size());
    fit.n_basis = m >= 8 ? 6 : (m >= 4 ? 3 : 1);

    for (int degree_try = 0; degree_try < 3; ++degree_try) {
      Eigen::MatrixXd A(m, fit.n_basis);
      for (int r = 0; r < m; ++r) {
        const double x = (pts[r].x - fit.center.x) / fit.scale;
        const double y = (pts[r].y - fit.center.y) / fit.scale;
        const double phi[6] = {1.0, x, y, x * x, x * y, y * y};
        for (int cidx = 0; cidx < fit.n_basis; ++cidx) A(r, cidx) = phi[cidx];
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
      if (qr.rank() < fit.n_basis && fit.n_basis > 1) {
        fit.n_basis = fit.n_basis == 6 ? 3 : 1;
        continue;
      }
      fit.coeffs.assign(ncomp, Eigen::VectorXd());
      Eigen::VectorXd rhs(m);
      for (int c = 0; c < ncomp; ++c) {
        for (int r = 0; r < m; ++r) rhs(r) = vals[r][c];
        fit.coeffs[c] = qr.solve(rhs);
      }
      break;
    }
  }

  std::vector<double> out(static_cast<std::size_t>(space.n_nodes()) * ncomp, 0.0);
  for (int v = 0; v < nv; ++v)
    for (int c = 0; c < ncomp; ++c)
      out[v * ncomp + c] = fits[v].eval(space.nodes[v], c);
  // Midside nodes: average of the two endpoint patch polynomials.
  std::unordered_map<std::uint64_t, int> seen;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const auto& dofs = space.elem_dofs[e];
    const int pairs[3][3] = {{1, 2, 3}, {2, 0, 4}, {0, 1, 5}};
    for (const auto& pr : pairs) {
      const int a = dofs[pr[0]], b = dofs[pr[1]], mid = dofs[pr[2]];
      const auto k = ukey(a, b);
      if (seen.count(k)) continue;
      seen[k] = 1;
      const Vec2 p = space.nodes[mid];
      for (int c = 0; c < ncomp; ++c)
        out[mid * ncomp + c] = 0.5 * (fits[a].eval(p, c) + fits[b].eval(p, c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary chains

BoundaryChain extract_chain(const P2Space& space, BoundaryTag tag) {
  const Mesh& mesh = *space.mesh;
  BoundaryChain chain;
  std::map<int, int> by_start;  // start vertex -> boundary edge index
  std::vector<int> tagged;
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    if (mesh.boundary_edges[k].tag != tag) continue;
    by_start[mesh.boundary_edges[k].a] = static_cast<int>(k);
    tagged.push_back(static_cast<int>(k));
  }
  if (tagged.empty()) return chain;

  // Find a chain head: a tagged edge whose start is not the end of another
  // tagged edge. If none exists the chain is closed.
  std::map<int, int> ends;
  for (int k : tagged) ends[mesh.boundary_edges[k].b] = k;
  int head = tagged.front();
  chain.closed = true;
  for (int k : tagged) {
    if (!ends.count(mesh.boundary_edges[k].a)) {
      head = k;
      chain.closed = false;
      break;
    }
  }

  int cur = head;
  std::size_t guard = 0;
  while (guard++ <= tagged.size()) {
    chain.edges.push_back(cur);
    const int nxt = mesh.boundary_edges[cur].b;
    auto it = by_start.find(nxt);
    if (it == by_start.end() || it->second == head) break;
    cur = it->second;
  }
  if (chain.edges.size() != tagged.size())
    throw Error(ErrorCode::MeshFailure,
                "tagged boundary is not a single chain");

  double s = 0.0;
  for (std::size_t i = 0; i < chain.edges.size(); ++i) {
    const int k = chain.edges[i];
    const auto& dofs = space.bedge_dofs[k];
    const double len = dist(space.nodes[dofs[0]], space.nodes[dofs[1]]);
    if (i == 0) {
      chain.nodes.push_back(dofs[0]);
      chain.s.push_back(0.0);
    }
    chain.nodes.push_back(dofs[2]);
    chain.s.push_back(s + 0.5 * len);
    chain.nodes.push_back(dofs[1]);
    chain.s.push_back(s + len);
    s += len;
  }
  return chain;
}

double chain_value_at(const BoundaryChain& chain,
                      const std::vector<double>& nodal_values, int edge_index,
                      double xi) {
  const double fa = nodal_values[2 * edge_index];
  const double fm = nodal_values[2 * edge_index + 1];
  const double fb = nodal_values[2 * edge_index + 2];
  return fa * (1.0 - xi) * (1.0 - 2.0 * xi) + fm * 4.0 * xi * (1.0 - xi) +
         fb * xi * (2.0 * xi - 1.0);
}

double surface_quadrature(
    const P2Space& space, const BoundaryChain& chain,
    const std::function<double(int, double, Vec2)>& integrand, int panels) {
  const auto& qr = edge_rule_3();
  panels = std::max(1, panels);
  double total = 0.0;
  for (std::size_t i = 0; i < chain.edges.size(); ++i) {
    const int k = chain.edges[i];
    const auto& dofs = space.bedge_dofs[k];
    const Vec2 a = space.nodes[dofs[0]];
    const Vec2 b = space.nodes[dofs[1]];
    const double len = dist(a, b);
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      for (int q = 0; q < 3; ++q) {
        const double xi = (p + qr.points[q]) / panels;
        acc += qr.weights[q] / panels *
               integrand(static_cast<int>(i), xi, a + (b - a) * xi);
      }
    }
    total += acc * len;
  }
  return total;
}

double chain_quadrature(const P2Space& space, const BoundaryChain& chain,
                        const std::vector<double>& nodal_values) {
  return surface_quadrature(space, chain, [&](int i, double xi, Vec2) {
    return chain_value_at(chain, nodal_values, i, xi);
  });
}

double chain_interpolate(const BoundaryChain& chain,
                         const std::vector<double>& nodal_values, double s) {
  if (chain.s.empty()) throw Error(ErrorCode::EmptySet, "empty chain");
  s = std::clamp(s, 0.0, chain.s.back());
  // Find the edge containing s.
  std::size_t lo = 0, hi = chain.edges.size();
  while (lo + 1 < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (chain.s[2 * mid] <= s)
      lo = mid;
    else
      hi = mid;
  }
  const double s0 = chain.s[2 * lo];
  const double s1 = chain.s[2 * lo + 2];
  const double x = (s1 > s0) ? (s - s0) / (s1 - s0) : 0.0;
  const double fa = nodal_values[2 * lo];
  const double fm = nodal_values[2 * lo + 1];
  const double fb = nodal_values[2 * lo + 2];
  return fa * (1.0 - x) * (1.0 - 2.0 * x) + fm * 4.0 * x * (1.0 - x) +
         fb * x * (2.0 * x - 1.0);
}

// ---------------------------------------------------------------------------

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& b, double rel_tol,
                             bool symmetric_positive, double* residual_out) {
  Eigen::VectorXd x;
  if (symmetric_positive) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::SingularSystem, "LDLT factorization failed");
    x = solver.solve(b);
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::SingularSystem, "LU factorization failed");
    x = solver.solve(b);
  }
  const double scale = b.norm();
  const double res = (A * x - b).norm() / (scale > 0.0 ? scale : 1.0);
  if (residual_out) *residual_out = res;
  if (!(res <= rel_tol))
    throw Error(ErrorCode::SingularSystem,
                "relative residual " + std::to_string(res) +
                    " exceeds tolerance");
  return x;
}

bool locate_point(const Mesh& mesh, const Vec2& p, int& elem, double lambda[3]) {
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const auto& t = mesh.triangles[e];
    const Vec2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
    const double area2 = (b - a).cross(c - a);
    const double l0 = (b - p).cross(c - p) / area2;
    const double l1 = (c - p).cross(a - p) / area2;
    const double l2 = 1.0 - l0 - l1;
    if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12) {
      elem = e;
      lambda[0] = l0;
      lambda[1] = l1;
      lambda[2] = l2;
      return true;
    }
  }
  return false;
}

}  // namespace pflow
