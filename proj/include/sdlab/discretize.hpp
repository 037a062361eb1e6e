#pragma once

#include <functional>
#include <vector>

#include "sdlab/drift.hpp"
#include "sdlab/grid.hpp"

namespace sdlab {

// Analytic scalar profile on the disk, (r, theta) -> value.
using ScalarFn = std::function<double(double, double)>;

// Analytic vector profile in polar components.
struct VectorFn {
  ScalarFn fr;
  ScalarFn ft;
};

enum class Scheme { Centered, Upwind };
enum class RhsMode { ScalarG, VectorF };

struct ProblemSpec {
  DriftSpec drift;
  RhsMode rhs_mode = RhsMode::ScalarG;
  ScalarFn g;   // rhs_mode == ScalarG: source g = -div f
  VectorFn f;   // rhs_mode == VectorF: flux whose -div drives the problem
  double q = 4.0;
  bool pinned = false;
  Scheme scheme = Scheme::Centered;
};

struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
};

// Discrete operator and right-hand side for
//   -Delta u + b^(alpha) . grad u = g
// on the disk grid. Interior rows are scaled by the node quadrature weight
// (finite-volume form), so rhs entries are w_k * g_k. Boundary rows are
// identity rows with rhs 0; if pinned, the center row is too.
struct LinearSystem {
  CsrMatrix A;
  std::vector<double> rhs;
  bool pinned = false;
  Scheme scheme = Scheme::Centered;
};

// Requires drift.epsilon > 0 when drift.alpha != 0 and the system is not
// pinned (pinning replaces the center equation, so the exact -alpha/r drift
// can be used at the r > 0 nodes).
LinearSystem assemble(const ProblemSpec& spec, const Grid& grid);

// The FV-scaled source vector alone (boundary and pinned entries zero).
std::vector<double> assemble_rhs(const ProblemSpec& spec, const Grid& grid);

// Nodal sampling of an analytic profile.
DiscreteField sample(const Grid& grid, const ScalarFn& fn);

// Centered discrete gradient in polar components (vr = d_r u, vt = (1/r)
// d_theta u). One-sided radial difference on the boundary ring; at the center
// the gradient magnitude (from a first-harmonic fit of the first ring) is
// stored in vr with vt = 0.
VectorFieldSample discrete_gradient(const DiscreteField& u, const Grid& grid);

// (||grad u||^2 + ||u||^2)^{1/2} with centered gradients and grid quadrature;
// the one discrete energy norm used everywhere.
double energy_norm(const DiscreteField& u, const Grid& grid);

// Quadrature of b^(alpha)_eps . grad u * eta with centered gradients.
double bilinear_form(const DiscreteField& u, const DiscreteField& eta,
                     const DriftSpec& spec, const Grid& grid);

// bilinear_form evaluated along a decreasing epsilon schedule until the value
// settles; returns the settled value (the eps -> 0 extrapolation).
double bilinear_form_eps_limit(const DiscreteField& u, const DiscreteField& eta,
                               double alpha, const DivfreePart& divfree,
                               const Grid& grid);

// l2 norm of (A u - rhs) over non-boundary, non-center rows with r >= r_min;
// the canonical interior-residual measure for kernel/self-consistency checks.
double interior_residual(const LinearSystem& sys, const DiscreteField& u,
                         const Grid& grid, double r_min);

}  // namespace sdlab
