#pragma once

#include <utility>
#include <vector>

#include "sdlab/discretize.hpp"

namespace sdlab {

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;  // relative 2-norm of the original system
  std::vector<double> epsilon_schedule;
  int fixed_point_iters = 0;
  bool converged = false;
  // energy-norm Cauchy increments between consecutive epsilon solves
  std::vector<double> cauchy_increments;
};

// Jacobi-equilibrated BiCGStab. Deterministic; returns the iterate even on
// non-convergence (converged = false). Throws on a structurally singular
// (all-zero) row. Optional warm start.
std::pair<DiscreteField, SolveReport> linear_solve(
    const LinearSystem& sys, double tol, const DiscreteField* x0 = nullptr);

// Theorem-4.1-style continuation: solve for each epsilon of a decreasing
// schedule and return the last solution. Requires alpha >= 0.
std::pair<DiscreteField, SolveReport> solve_regularized(
    const ProblemSpec& spec, const Grid& grid,
    const std::vector<double>& eps_schedule, double tol);

// Change-of-variables pipeline for alpha < 0, b = 0: solve the w-problem
//   -Delta w - |alpha| x/|x|^2 . grad w = r^(-|alpha|) g
// (benign drift sign) and return u = r^|alpha| w, which vanishes at the
// center exactly. Rejects sources that do not vanish near the origin, where
// the r^(-|alpha|) weight is not integrable against them.
std::pair<DiscreteField, SolveReport> solve_pinned_cov(const ProblemSpec& spec,
                                                       const Grid& grid,
                                                       double tol);

// Picard iteration v <- A(v) where A(v) solves the pinned b = 0 problem with
// source g - b . grad v. Stops when the relative discrete L_q increment drops
// below tol; three consecutive growing increments report non-convergence
// (divergence is a reportable outcome, not an error). damping s in (0, 1]
// applies v <- (1-s) v + s A(v).
std::pair<DiscreteField, SolveReport> solve_pinned_fixed_point(
    const ProblemSpec& spec, const Grid& grid, double tol, int max_outer,
    double damping = 1.0);

// default continuation schedule 1e-1 .. 1e-4
std::vector<double> default_eps_schedule();

}  // namespace sdlab
