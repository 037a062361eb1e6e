#include "sdlab/solve.hpp"

#include <cmath>
#include <stdexcept>

#include "sdlab/kernels.hpp"

namespace sdlab {

namespace {

using kernels::axpy;
using kernels::dot;
using kernels::nrm2;

constexpr int kMaxIterations = 20000;

void enforce_dirichlet(DiscreteField& u, const Grid& grid, bool pinned) {
  for (int k = 0; k < grid.node_count; ++k)
    if (grid.is_boundary[k]) u[k] = 0.0;
  if (pinned) u[0] = 0.0;
}

double lq_norm(const DiscreteField& u, const Grid& grid, double q) {
  double s = 0.0;
  for (int k = 0; k < grid.node_count; ++k)
    s += grid.quad_w[k] * std::pow(std::abs(u[k]), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

std::vector<double> default_eps_schedule() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

std::pair<DiscreteField, SolveReport> linear_solve(const LinearSystem& sys,
                                                   double tol,
                                                   const DiscreteField* x0) {
  if (tol <= 0.0 || tol > 1e-2)
    throw std::invalid_argument("linear_solve: tol must be in (0, 1e-2]");
  const int n = sys.A.n;
  if (n <= 0 || sys.A.row_ptr.size() != static_cast<std::size_t>(n) + 1 ||
      sys.rhs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("linear_solve: malformed system");

  // Jacobi row equilibration; diag == 0 rows are left unscaled.
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < n; ++i) {
    if (sys.A.row_ptr[i] == sys.A.row_ptr[i + 1])
      throw std::runtime_error("linear_solve: structurally singular row");
    for (int k = sys.A.row_ptr[i]; k < sys.A.row_ptr[i + 1]; ++k)
      if (sys.A.col[k] == i && sys.A.val[k] != 0.0) diag[i] = sys.A.val[k];
  }

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    kernels::spmv(n, sys.A.row_ptr.data(), sys.A.col.data(), sys.A.val.data(),
                  x.data(), y.data());
    for (int i = 0; i < n; ++i) y[i] /= diag[i];
  };

  SolveReport rep;
  DiscreteField x(n);
  if (x0 && x0->size() == n) x = *x0;

  const double bnorm = nrm2(sys.rhs.size(), sys.rhs.data());
  if (bnorm == 0.0) {
    rep.converged = true;
    return {DiscreteField(n), rep};
  }

  // residual of the ORIGINAL system, recovered from the equilibrated one
  auto true_resnorm = [&](const std::vector<double>& r_eq) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ri = r_eq[i] * diag[i];
      s += ri * ri;
    }
    return std::sqrt(s) / bnorm;
  };

  std::vector<double> b_eq(sys.rhs);
  for (int i = 0; i < n; ++i) b_eq[i] /= diag[i];

  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), tmp(n);
  apply(x.v, tmp);
  for (int i = 0; i < n; ++i) r[i] = b_eq[i] - tmp[i];
  rhat = r;

  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double resnorm = true_resnorm(r);

  for (rep.iterations = 0; rep.iterations < kMaxIterations && resnorm > tol;
       ++rep.iterations) {
    const double rho_new = dot(n, rhat.data(), r.data());
    if (std::abs(rho_new) < 1e-300) {  // breakdown: restart from current r
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    apply(p, v);
    const double rhat_v = dot(n, rhat.data(), v.data());
    if (std::abs(rhat_v) < 1e-300) {
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    alpha = rho / rhat_v;
    for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    apply(s, t);
    const double tt = dot(n, t.data(), t.data());
    omega = (tt > 0.0) ? dot(n, t.data(), s.data()) / tt : 0.0;
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i] + omega * s[i];
    for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    resnorm = true_resnorm(r);
    if (omega == 0.0) break;
  }

  // explicit final residual (iterated r can drift)
  apply(x.v, tmp);
  for (int i = 0; i < n; ++i) tmp[i] = b_eq[i] - tmp[i];
  rep.final_residual = true_resnorm(tmp);
  rep.converged = rep.final_residual <= tol * 1.0001;
  rep.iterations += 1;
  return {std::move(x), rep};
}

std::pair<DiscreteField, SolveReport> solve_regularized(
    const ProblemSpec& spec, const Grid& grid,
    const std::vector<double>& eps_schedule, double tol) {
  if (spec.drift.alpha < 0.0)
    throw std::invalid_argument(
        "solve_regularized: alpha < 0 needs the pinned pipelines");
  if (eps_schedule.empty())
    throw std::invalid_argument("solve_regularized: empty schedule");
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i)
    if (eps_schedule[i + 1] >= eps_schedule[i])
      throw std::invalid_argument("solve_regularized: schedule must decrease");
  if (eps_schedule.back() <= 0.0)
    throw std::invalid_argument("solve_regularized: schedule must stay > 0");

  SolveReport rep;
  rep.converged = true;
  DiscreteField u(grid.node_count);
  bool have_prev = false;
  DiscreteField prev;

  for (double eps : eps_schedule) {
    ProblemSpec s = spec;
    s.drift.epsilon = eps;
    const LinearSystem sys = assemble(s, grid);
    auto [uk, r] = linear_solve(sys, tol, have_prev ? &u : nullptr);
    rep.iterations += r.iterations;
    rep.final_residual = r.final_residual;
    rep.converged = rep.converged && r.converged;
    rep.epsilon_schedule.push_back(eps);
    if (have_prev) {
      DiscreteField diff(grid.node_count);
      for (int k = 0; k < grid.node_count; ++k) diff[k] = uk[k] - prev[k];
      rep.cauchy_increments.push_back(energy_norm(diff, grid));
    }
    prev = uk;
    u = std::move(uk);
    have_prev = true;
  }
  enforce_dirichlet(u, grid, spec.pinned);
  return {std::move(u), rep};
}

std::pair<DiscreteField, SolveReport> solve_pinned_cov(const ProblemSpec& spec,
                                                       const Grid& grid,
                                                       double tol) {
  if (spec.drift.alpha >= 0.0)
    throw std::invalid_argument("solve_pinned_cov: requires alpha < 0");
  if (!std::holds_alternative<NoDivfree>(spec.drift.divfree))
    throw std::invalid_argument("solve_pinned_cov: requires b = 0");
  if (spec.rhs_mode != RhsMode::ScalarG || !spec.g)
    throw std::invalid_argument("solve_pinned_cov: requires a scalar source");

  const double m = std::abs(spec.drift.alpha);

  // The w-problem source is r^(-m) g; reject g that does not vanish near the
  // origin (the weight is not integrable against it there).
  const DiscreteField gs = sample(grid, spec.g);
  double gmax = 0.0;
  for (int k = 0; k < grid.node_count; ++k) gmax = std::max(gmax, std::abs(gs[k]));
  const double near_origin_tol = 1e-12 * std::max(1.0, gmax);
  if (std::abs(gs[0]) > near_origin_tol)
    throw std::invalid_argument(
        "solve_pinned_cov: source must vanish near the origin (the r^alpha "
        "weight is not integrable against it)");
  if (m >= 2.0) {
    for (int k = 1; k < grid.node_count; ++k)
      if (grid.r[k] <= 0.2 && std::abs(gs[k]) > near_origin_tol)
        throw std::invalid_argument(
            "solve_pinned_cov: |alpha| >= 2 needs a source supported away "
            "from the origin");
  }

  ScalarFn g = spec.g;
  ProblemSpec wspec;
  wspec.drift.alpha = m;  // benign sign
  wspec.drift.divfree = NoDivfree{};
  wspec.rhs_mode = RhsMode::ScalarG;
  wspec.g = [g, m](double r, double theta) {
    return r == 0.0 ? 0.0 : std::pow(r, -m) * g(r, theta);
  };
  wspec.q = spec.q;
  wspec.scheme = spec.scheme;

  auto [w, rep] = solve_regularized(wspec, grid, default_eps_schedule(), tol);

  DiscreteField u(grid.node_count);
  for (int k = 1; k < grid.node_count; ++k)
    u[k] = std::pow(grid.r[k], m) * w[k];
  u[0] = 0.0;  // exact pinning
  enforce_dirichlet(u, grid, /*pinned=*/true);
  return {std::move(u), rep};
}

std::pair<DiscreteField, SolveReport> solve_pinned_fixed_point(
    const ProblemSpec& spec, const Grid& grid, double tol, int max_outer,
    double damping) {
  if (spec.drift.alpha >= 0.0)
    throw std::invalid_argument("solve_pinned_fixed_point: requires alpha < 0");
  if (max_outer < 1)
    throw std::invalid_argument("solve_pinned_fixed_point: max_outer >= 1");
  if (damping <= 0.0 || damping > 1.0)
    throw std::invalid_argument("solve_pinned_fixed_point: damping in (0, 1]");

  const double inner_tol = tol / 10.0;

  // inner operator: pinned b = 0 problem with the exact -alpha/r drift
  ProblemSpec inner = spec;
  inner.drift.divfree = NoDivfree{};
  inner.drift.epsilon = 0.0;
  inner.pinned = true;

  LinearSystem sys = assemble(inner, grid);
  const std::vector<double> base_rhs = assemble_rhs(inner, grid);

  const bool has_b = !std::holds_alternative<NoDivfree>(spec.drift.divfree);
  VectorFieldSample b;
  if (has_b) {
    DriftSpec bonly{0.0, 0.0, spec.drift.divfree};
    b = eval_drift(bonly, grid);
  }

  SolveReport rep;
  DiscreteField v(grid.node_count);
  double prev_inc = 0.0;
  int growth_streak = 0;

  for (int outer = 0; outer < max_outer; ++outer) {
    sys.rhs = base_rhs;
    if (has_b && outer >= 0) {
      const VectorFieldSample gv = discrete_gradient(v, grid);
      for (int k = 1; k < grid.node_count; ++k) {
        if (grid.is_boundary[k]) continue;
        const double bdotgrad = b.vr[k] * gv.vr[k] + b.vt[k] * gv.vt[k];
        sys.rhs[k] -= grid.quad_w[k] * bdotgrad;
      }
    }
    auto [u, r] = linear_solve(sys, inner_tol, &v);
    enforce_dirichlet(u, grid, /*pinned=*/true);
    rep.iterations += r.iterations;
    rep.final_residual = r.final_residual;
    rep.fixed_point_iters = outer + 1;

    DiscreteField next(grid.node_count);
    for (int k = 0; k < grid.node_count; ++k)
      next[k] = (1.0 - damping) * v[k] + damping * u[k];

    DiscreteField diff(grid.node_count);
    for (int k = 0; k < grid.node_count; ++k) diff[k] = next[k] - v[k];
    const double inc = lq_norm(diff, grid, spec.q);
    const double scale = lq_norm(next, grid, spec.q);
    v = std::move(next);

    if (!has_b) {  // A has no v-dependence: one application is the solution
      rep.converged = r.converged;
      break;
    }
    if (inc <= tol * std::max(scale, 1e-300)) {
      rep.converged = r.converged;
      break;
    }
    if (outer > 0 && inc > prev_inc) {
      if (++growth_streak >= 3) {
        rep.converged = false;  // Picard divergence: reportable, not a bug
        break;
      }
    } else {
      growth_streak = 0;
    }
    prev_inc = inc;
  }
  return {std::move(v), rep};
}

}  // namespace sdlab
