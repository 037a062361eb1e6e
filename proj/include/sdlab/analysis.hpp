#pragma once

#include <map>
#include <vector>

#include "sdlab/discretize.hpp"

namespace sdlab {

// Measured norms and oscillation data for one field on one grid.
struct EstimateReport {
  double energy_norm = 0.0;
  double sup_norm = 0.0;
  std::map<double, double> grad_lp;  // p in {2, 2.5, 3, 4}
  // (R, osc over B_R) with R = 2^-k strictly decreasing
  std::vector<std::pair<double, double>> osc_table;
  double fitted_mu = 0.0;     // clamped to [0, 1.5]
  double fitted_order = 0.0;  // filled by convergence studies, else 0
};

// c (r^|alpha| - 1): the non-trivial homogeneous family that exists exactly
// when alpha < 0 and pinning is absent. Boundary values exactly 0, center -c.
DiscreteField kernel_solution(double alpha, double c, const Grid& grid);

// v(r) = c1 r^-alpha + c2 (alpha != 0) or c1 ln r + c2 (alpha == 0).
// Rejects center evaluation where the formula diverges (alpha > 0 with
// c1 != 0, or the log case with c1 != 0).
DiscreteField radial_family(double alpha, double c1, double c2,
                            const Grid& grid);

enum class UStarId {
  OneMinusR2,        // 1 - r^2
  R2OneMinusR,       // r^2 (1 - r), vanishes at origin
  RPowOnePlusMOneMinusR,  // r^(1+|alpha|) (1 - r), vanishes at origin
};

struct ManufacturedProblem {
  ScalarFn g;        // -Delta u* + b^(alpha) . grad u*, symbolic
  ScalarFn u_exact;  // u*
  bool vanishes_at_origin = false;  // required for pinned runs
};

// Closed symbolic catalog; drift must have b = 0 or swirl (whose angular
// field is orthogonal to radial gradients and contributes nothing).
ManufacturedProblem manufactured(UStarId id, const DriftSpec& spec);

// Fills every EstimateReport field. osc over B_R is max-min over nodes with
// r <= R, R = 2^-k for k = 0..log2(n_r/4); fitted_mu is the least-squares
// slope of log osc vs log R over the 4 smallest usable radii.
EstimateReport measure(const DiscreteField& u, const Grid& grid);

// Thm-3.8-style dyadic contraction diagnostics: for each dyadic R with both
// B_2R and B_R/2 available, the ratio osc(B_R/2)/osc(B_2R) where the
// denominator exceeds 10 machine epsilons. Constant fields give an empty
// list. q > 2 and f_norm >= 0 are validated context parameters.
std::vector<std::pair<double, double>> oscillation_contraction(
    const DiscreteField& u, const Grid& grid, double q, double f_norm);

// Least-squares slope of log error vs log h; needs >= 3 pairs, positive
// errors, strictly decreasing h.
double fit_convergence_order(const std::vector<double>& errors,
                             const std::vector<double>& h_values);

// discrete L_p norm with grid quadrature
double lp_norm(const DiscreteField& u, const Grid& grid, double p);

double sup_norm(const DiscreteField& u);
double sup_diff(const DiscreteField& a, const DiscreteField& b);
DiscreteField subtract(const DiscreteField& a, const DiscreteField& b);

}  // namespace sdlab
