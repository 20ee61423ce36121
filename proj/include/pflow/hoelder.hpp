#pragma once

#include <vector>

#include "pflow/core.hpp"

namespace pflow {

/// Uniformly sampled scalar or vector function on a structured 1D or 2D grid.
/// Values are stored per component, row-major with x fastest for 2D.
struct GridField {
  int nx = 0;
  int ny = 1;  // 1 for a 1D grid
  double hx = 0.0;
  double hy = 0.0;
  std::vector<std::vector<double>> components;

  bool is_1d() const { return ny == 1; }
  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  double& at(int c, int i, int j) { return components[c][j * nx + i]; }
  double at(int c, int i, int j) const { return components[c][j * nx + i]; }

  static GridField sample_1d(int n, double a, double b,
                             const std::vector<double (*)(double)>& fns);
};

/// Discrete estimate of the C^{k,alpha} norm of a sampled field:
/// max over derivative orders <= k of finite-difference sup norms, plus the
/// max over order-k derivatives of the discrete Hoelder seminorm
/// sup_{x!=y} |f(x)-f(y)| / |x-y|^alpha over sampled pairs.
/// Throws GridTooCoarse when any axis has fewer than k+2 samples.
double hoelder_norm_estimate(const GridField& field, int k, double alpha);

}  // namespace pflow
