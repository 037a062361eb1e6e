#include "sdlab/grid.hpp"

#include <numbers>
#include <stdexcept>

#include "sdlab/kernels.hpp"

namespace sdlab {

Grid build_disk_grid(int n_r, int n_theta) {
  if (n_r < 4) throw std::invalid_argument("build_disk_grid: n_r must be >= 4");
  if (n_theta < 8 || n_theta % 2 != 0)
    throw std::invalid_argument("build_disk_grid: n_theta must be even and >= 8");

  Grid g;
  g.n_r = n_r;
  g.n_theta = n_theta;
  g.h_r = 1.0 / n_r;
  g.h_theta = 2.0 * std::numbers::pi / n_theta;
  g.node_count = 1 + n_r * n_theta;

  g.r.assign(g.node_count, 0.0);
  g.theta.assign(g.node_count, 0.0);
  g.quad_w.assign(g.node_count, 0.0);
  g.is_boundary.assign(g.node_count, 0);

  // center node owns the disk of radius h_r/2
  g.quad_w[0] = std::numbers::pi * g.h_r * g.h_r / 4.0;

  for (int i = 1; i <= n_r; ++i) {
    const double ri = i * g.h_r;
    const bool bnd = (i == n_r);
    for (int j = 0; j < n_theta; ++j) {
      const int k = g.index(i, j);
      g.r[k] = ri;
      g.theta[k] = j * g.h_theta;
      g.quad_w[k] = ri * g.h_r * g.h_theta * (bnd ? 0.5 : 1.0);
      g.is_boundary[k] = bnd ? 1 : 0;
    }
  }
  return g;
}

RadialGrid build_radial_grid(int n) {
  if (n < 2) throw std::invalid_argument("build_radial_grid: n must be >= 2");
  RadialGrid g;
  g.n = n;
  g.h = 1.0 / n;
  g.r.resize(n + 1);
  for (int i = 0; i <= n; ++i) g.r[i] = i * g.h;
  return g;
}

double integrate(const Grid& grid, const DiscreteField& field) {
  if (field.size() != grid.node_count)
    throw std::invalid_argument("integrate: field/grid size mismatch");
  return kernels::dot(field.v.size(), grid.quad_w.data(), field.v.data());
}

}  // namespace sdlab
