#pragma once

#include <cstdint>
#include <vector>

namespace sdlab {

// Polar tensor mesh on the unit disk with a single center node.
//
// Node ordering: center first, then ring-major / angle-minor, i.e.
// index(i, j) = 1 + (i-1)*n_theta + j for ring i in [1, n_r] and angle
// slot j in [0, n_theta). Ring n_r is the boundary ring at r = 1.
struct Grid {
  int n_r = 0;
  int n_theta = 0;
  double h_r = 0.0;
  double h_theta = 0.0;
  int node_count = 0;

  std::vector<double> r;        // per-node radius, r[0] = 0
  std::vector<double> theta;    // per-node angle, theta[0] = 0 by convention
  std::vector<double> quad_w;   // per-node area weights
  std::vector<std::uint8_t> is_boundary;

  int index(int ring, int j) const { return 1 + (ring - 1) * n_theta + j; }
  int ring_of(int node) const {
    return node == 0 ? 0 : 1 + (node - 1) / n_theta;
  }
  int angle_slot_of(int node) const {
    return node == 0 ? 0 : (node - 1) % n_theta;
  }
  // angular neighbor with periodic wrap, ring >= 1
  int angle_neighbor(int node, int step) const {
    const int ring = ring_of(node);
    const int j = (angle_slot_of(node) + step % n_theta + n_theta) % n_theta;
    return index(ring, j);
  }
};

// Nodal scalar values on a Grid.
struct DiscreteField {
  std::vector<double> v;

  DiscreteField() = default;
  explicit DiscreteField(int n, double fill = 0.0) : v(n, fill) {}
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }
};

// 1D radial mesh on [0, 1], nodes r_i = i/n.
struct RadialGrid {
  int n = 0;
  double h = 0.0;
  std::vector<double> r;
};

// Requires n_r >= 4 and even n_theta >= 8 (the center-node stencil averages
// over a full ring, which needs the angular symmetry an even count gives).
Grid build_disk_grid(int n_r, int n_theta);

RadialGrid build_radial_grid(int n);

// Quadrature sum of a nodal field, Σ w_k f_k. Linear in the field.
double integrate(const Grid& grid, const DiscreteField& field);

}  // namespace sdlab
