#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <vector>

#include "pflow/core.hpp"
#include "pflow/mesh.hpp"

namespace pflow {

/// Quadratic Lagrange space on a triangle mesh: vertex nodes first, then one
/// node per edge midpoint. Local node order: vertices 0,1,2 then midpoints of
/// edges (1,2), (2,0), (0,1).
struct P2Space {
  const Mesh* mesh = nullptr;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 6>> elem_dofs;
  std::vector<std::array<int, 3>> bedge_dofs;  // a, b, midpoint per boundary edge
  int n_vertex_nodes = 0;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  static P2Space build(const Mesh& mesh);
};

/// Nodal finite-element function on a P2Space; `ncomp` interleaved components.
struct Field {
  const P2Space* space = nullptr;
  int ncomp = 1;
  std::vector<double> values;

  double value(int node, int c = 0) const { return values[node * ncomp + c]; }
  double& value(int node, int c = 0) { return values[node * ncomp + c]; }
  /// Evaluate at barycentric coordinates inside an element.
  double eval(int elem, const double lambda[3], int c = 0) const;
  Vec2 eval_grad(int elem, const double lambda[3], int c = 0) const;
};

// P2 reference basis.
void p2_basis(const double lambda[3], double N[6]);
/// Physical gradients of the 6 basis functions on element `e`.
void p2_grad(const P2Space& space, int elem, const double lambda[3],
             Vec2 grad[6]);
double element_area(const P2Space& space, int elem);

struct TriQuadrature {
  std::vector<std::array<double, 3>> points;  // barycentric
  std::vector<double> weights;                // sum to 1
};
const TriQuadrature& tri_rule_3();  // degree 2
const TriQuadrature& tri_rule_7();  // degree 5

struct EdgeQuadrature {
  std::array<double, 3> points;   // on [0,1]
  std::array<double, 3> weights;  // sum to 1
};
const EdgeQuadrature& edge_rule_3();

/// Superconvergent patch recovery: least-squares polynomial fits of values
/// sampled at the 3-point rule points of each element, assembled per vertex
/// patch and averaged onto midside nodes. `samples[e*3 + q]` holds `ncomp`
/// values. Returns nodal values, `ncomp` interleaved.
std::vector<double> spr_recover(const P2Space& space,
                                const std::vector<std::vector<double>>& samples,
                                int ncomp);

/// Ordered P2 nodes along all boundary edges carrying `tag`:
/// nodes alternate vertex, midpoint, vertex, ... following the
/// counterclockwise boundary orientation. `s` is the chord arc length.
struct BoundaryChain {
  std::vector<int> edges;  // boundary edge indices, in walk order
  std::vector<int> nodes;  // P2 node ids; even entries are vertices
  std::vector<double> s;
  bool closed = false;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  double length() const { return s.empty() ? 0.0 : s.back(); }
};
BoundaryChain extract_chain(const P2Space& space, BoundaryTag tag);

/// Quadratic trace interpolation of chain-nodal data on edge `edge_index` at
/// local coordinate xi in [0,1].
double chain_value_at(const BoundaryChain& chain,
                      const std::vector<double>& nodal_values, int edge_index,
                      double xi);

/// Composite 3-point Gauss quadrature along a chain of an integrand evaluated
/// at the quadrature points (edge index, local coordinate, position). `panels`
/// subdivides every edge for pure quadrature refinement of the same fields.
double surface_quadrature(
    const P2Space& space, const BoundaryChain& chain,
    const std::function<double(int, double, Vec2)>& integrand, int panels = 1);

/// Composite 3-point Gauss quadrature of a nodal integrand along a chain
/// (piecewise-quadratic interpolation on every edge).
double chain_quadrature(const P2Space& space, const BoundaryChain& chain,
                        const std::vector<double>& nodal_values);

/// Piecewise-quadratic interpolation of chain-nodal data at arc coordinate s.
double chain_interpolate(const BoundaryChain& chain,
                         const std::vector<double>& nodal_values, double s);

/// Sparse direct solve with a relative-residual check; throws SingularSystem
/// when factorization fails or the residual exceeds `rel_tol`.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& b, double rel_tol,
                             bool symmetric_positive, double* residual_out);

/// Element and barycentric coordinates of a point (brute-force scan).
bool locate_point(const Mesh& mesh, const Vec2& p, int& elem, double lambda[3]);

}  // namespace pflow
