#include "pflow/hoelder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pflow/errors.hpp"

namespace pflow {

namespace {

// One central difference along x; the valid index window shrinks by one on
// each side. Arrays keep the full grid size, the caller tracks the window.
void diff_x(const std::vector<double>& in, std::vector<double>& out, int nx,
            int ny, double hx) {
  out.assign(in.size(), 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i)
      out[j * nx + i] = (in[j * nx + i + 1] - in[j * nx + i - 1]) / (2.0 * hx);
}

void diff_y(const std::vector<double>& in, std::vector<double>& out, int nx,
            int ny, double hy) {
  out.assign(in.size(), 0.0);
  for (int j = 1; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out[j * nx + i] = (in[(j + 1) * nx + i] - in[(j - 1) * nx + i]) / (2.0 * hy);
}

struct DerivArray {
  std::vector<double> values;
  int margin_x = 0;  // invalid border width along x
  int margin_y = 0;
};

// All mixed derivatives D^(ax,ay) f with ax+ay == order, computed by
// iterated central differences from the previous order.
std::vector<DerivArray> next_order(const std::vector<DerivArray>& prev, int nx,
                                   int ny, double hx, double hy, bool two_d) {
  std::vector<DerivArray> out;
  // prev[m] holds (ax = order-1-m, ay = m); differentiate the first in x and
  // every entry in y to enumerate order+1 without duplicates.
  for (std::size_t m = 0; m < prev.size(); ++m) {
    if (m == 0) {
      DerivArray d;
      diff_x(prev[0].values, d.values, nx, ny, hx);
      d.margin_x = prev[0].margin_x + 1;
      d.margin_y = prev[0].margin_y;
      out.push_back(std::move(d));
    }
    if (two_d) {
      DerivArray d;
      diff_y(prev[m].values, d.values, nx, ny, hy);
      d.margin_x = prev[m].margin_x;
      d.margin_y = prev[m].margin_y + 1;
      out.push_back(std::move(d));
    }
  }
  if (!two_d) out.resize(1);
  return out;
}

double window_sup(const DerivArray& d, int nx, int ny) {
  double sup = 0.0;
  for (int j = d.margin_y; j < ny - d.margin_y; ++j)
    for (int i = d.margin_x; i < nx - d.margin_x; ++i)
      sup = std::max(sup, std::abs(d.values[j * nx + i]));
  return sup;
}

// Discrete Hoelder seminorm over all sampled pairs in the valid window.
// Distances on a uniform grid take few distinct values, so |x-y|^alpha is
// precomputed into a lookup table.
double window_seminorm(const DerivArray& d, int nx, int ny, double hx,
                       double hy, double alpha) {
  const int x0 = d.margin_x, x1 = nx - d.margin_x;
  const int y0 = d.margin_y, y1 = ny - d.margin_y;
  const int wx = x1 - x0, wy = y1 - y0;
  if (wx <= 0 || wy <= 0) return 0.0;

  std::vector<double> inv_pow(static_cast<std::size_t>(wx) * wy, 0.0);
  for (int dj = 0; dj < wy; ++dj)
    for (int di = 0; di < wx; ++di) {
      if (di == 0 && dj == 0) continue;
      const double r = std::hypot(di * hx, dj * hy);
      inv_pow[dj * wx + di] = 1.0 / std::pow(r, alpha);
    }

  double sup = 0.0;
  for (int j = y0; j < y1; ++j) {
    for (int i = x0; i < x1; ++i) {
      const double fi = d.values[j * nx + i];
      for (int jj = j; jj < y1; ++jj) {
        const int ii0 = (jj == j) ? i + 1 : x0;
        const double* row = &d.values[jj * nx];
        const double* pw = &inv_pow[(jj - j) * wx];
        for (int ii = ii0; ii < x1; ++ii) {
          const double q = std::abs(fi - row[ii]) * pw[std::abs(ii - i)];
          if (q > sup) sup = q;
        }
      }
    }
  }
  return sup;
}

}  // namespace

GridField GridField::sample_1d(int n, double a, double b,
                               const std::vector<double (*)(double)>& fns) {
  GridField g;
  g.nx = n;
  g.ny = 1;
  g.hx = (b - a) / (n - 1);
  g.hy = 0.0;
  for (auto* fn : fns) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = fn(a + i * g.hx);
    g.components.push_back(std::move(v));
  }
  return g;
}

double hoelder_norm_estimate(const GridField& field, int k, double alpha) {
  if (k < 0 || alpha <= 0.0 || alpha > 1.0)
    throw Error(ErrorCode::ConfigError,
                "hoelder_norm_estimate requires k >= 0 and alpha in (0,1]");
  const bool two_d = !field.is_1d();
  if (field.nx < k + 2 || (two_d && field.ny < k + 2))
    throw Error(ErrorCode::GridTooCoarse,
                "need at least k+2 samples per axis");
  if (field.components.empty())
    throw Error(ErrorCode::ConfigError, "field has no components");

  double norm = 0.0;
  for (const auto& comp : field.components) {
    std::vector<DerivArray> order = {DerivArray{comp, 0, 0}};
    double max_sup = 0.0;
    for (int o = 0; o < k; ++o) {
      for (const auto& d : order)
        max_sup = std::max(max_sup, window_sup(d, field.nx, field.ny));
      order = next_order(order, field.nx, field.ny, field.hx, field.hy, two_d);
    }
    double max_semi = 0.0;
    for (const auto& d : order) {
      max_sup = std::max(max_sup, window_sup(d, field.nx, field.ny));
      max_semi = std::max(max_semi, window_seminorm(d, field.nx, field.ny,
                                                    field.hx, field.hy, alpha));
    }
    norm = std::max(norm, max_sup + max_semi);
  }
  return norm;
}

}  // namespace pflow
