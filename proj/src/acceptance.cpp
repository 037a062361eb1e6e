#include "sdlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sdlab/analysis.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/solve.hpp"

namespace sdlab::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

CriterionResult make_result(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

// When the scheme reproduces a profile to the solver floor, an order fit is
// ill-posed; treat errors below this (relative to the profile scale) as exact.
constexpr double kExactnessFloor = 1e-7;

struct ConvergenceRun {
  std::vector<double> h, err_sup;
};

ConvergenceRun manufactured_errors(UStarId id, double alpha, Scheme scheme,
                                   const std::vector<std::pair<int, int>>& grids,
                                   double tol) {
  ConvergenceRun out;
  const ManufacturedProblem mp =
      manufactured(id, DriftSpec{alpha, 0.0, NoDivfree{}});
  for (auto [nr, nt] : grids) {
    const Grid grid = build_disk_grid(nr, nt);
    ProblemSpec spec;
    spec.drift = DriftSpec{alpha, alpha == 0.0 ? 0.0 : 1e-10, NoDivfree{}};
    spec.g = mp.g;
    spec.scheme = scheme;
    auto [u, rep] = linear_solve(assemble(spec, grid), tol);
    out.h.push_back(grid.h_r);
    out.err_sup.push_back(sup_diff(u, sample(grid, mp.u_exact)));
  }
  return out;
}

double order_of(const ConvergenceRun& run) {
  std::vector<double> e = run.err_sup;
  for (double& x : e) x = std::max(x, 1e-16);
  return fit_convergence_order(e, run.h);
}

bool csr_equal(const CsrMatrix& a, const CsrMatrix& b) {
  return a.n == b.n && a.row_ptr == b.row_ptr && a.col == b.col &&
         a.val == b.val;
}

CriterionResult criterion1() {
  CriterionResult c = make_result(1, "manufactured convergence (centered 2nd, upwind 1st)");
  const std::vector<std::pair<int, int>> grids{{32, 64}, {64, 128}, {128, 256}};
  const double tol = 1e-10;
  std::ostringstream detail;
  bool ok = true;

  for (double alpha : {0.0, 1.0, 2.0}) {
    const ConvergenceRun run =
        manufactured_errors(UStarId::OneMinusR2, alpha, Scheme::Centered, grids, tol);
    const double maxerr =
        *std::max_element(run.err_sup.begin(), run.err_sup.end());
    if (maxerr <= kExactnessFloor) {
      // profile reproduced to the solver floor; measure the genuine order on
      // a profile the stencil is not exact on
      const ConvergenceRun aux = manufactured_errors(
          UStarId::R2OneMinusR, alpha, Scheme::Centered, grids, tol);
      const double order = order_of(aux);
      ok = ok && order >= 1.7 && order <= 2.3;
      detail << "centered a=" << alpha << ": exact (err " << fmt(maxerr)
             << "), aux order " << fmt(order) << "; ";
    } else {
      const double order = order_of(run);
      ok = ok && order >= 1.7 && order <= 2.3;
      detail << "centered a=" << alpha << ": order " << fmt(order) << "; ";
    }
  }

  for (double alpha : {1.0, 2.0}) {
    const ConvergenceRun run = manufactured_errors(
        UStarId::OneMinusR2, alpha, Scheme::Upwind, grids, tol);
    const double order = order_of(run);
    ok = ok && order >= 0.7 && order <= 1.3;
    detail << "upwind a=" << alpha << ": order " << fmt(order) << "; ";
  }
  {
    // alpha = 0 upwind has no drift to upwind: the scheme must coincide with
    // centered, so its convergence is covered by the centered checks above
    const Grid grid = build_disk_grid(32, 64);
    const ManufacturedProblem mp =
        manufactured(UStarId::OneMinusR2, DriftSpec{0.0, 0.0, NoDivfree{}});
    ProblemSpec spec;
    spec.g = mp.g;
    spec.scheme = Scheme::Upwind;
    const LinearSystem up = assemble(spec, grid);
    spec.scheme = Scheme::Centered;
    const LinearSystem ce = assemble(spec, grid);
    const bool same = csr_equal(up.A, ce.A);
    ok = ok && same;
    detail << "upwind a=0 == centered: " << (same ? "yes" : "NO");
  }

  c.passed = ok;
  c.detail = detail.str();
  return c;
}

CriterionResult criterion2() {
  CriterionResult c = make_result(2, "uniqueness for alpha >= 0 (homogeneous -> zero)");
  const double tol = 1e-8;
  const Grid grid = build_disk_grid(64, 128);
  std::ostringstream detail;
  bool ok = true;
  for (double alpha : {0.5, 2.0}) {
    for (int bcase = 0; bcase < 2; ++bcase) {
      ProblemSpec spec;
      spec.drift.alpha = alpha;
      spec.drift.epsilon = 1e-6;
      if (bcase == 1) spec.drift.divfree = Swirl{0.2};
      spec.g = [](double, double) { return 0.0; };
      auto [u, rep] = linear_solve(assemble(spec, grid), tol);
      const double s = sup_norm(u);
      ok = ok && rep.converged && s <= 10.0 * tol;
      detail << "a=" << alpha << (bcase ? " swirl" : " b=0") << ": sup "
             << fmt(s) << "; ";
    }
  }
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

CriterionResult criterion3() {
  CriterionResult c = make_result(3, "non-uniqueness exhibit for alpha < 0 (kernel family)");
  const double alpha = -0.5;
  std::vector<double> residuals, energies;
  for (int nr : {32, 64, 128}) {
    const Grid grid = build_disk_grid(nr, 2 * nr);
    ProblemSpec spec;
    spec.drift = DriftSpec{alpha, 1e-12, NoDivfree{}};
    spec.g = [](double, double) { return 0.0; };
    const LinearSystem sys = assemble(spec, grid);
    const DiscreteField kern = kernel_solution(alpha, 1.0, grid);
    residuals.push_back(interior_residual(sys, kern, grid, 2.0 * grid.h_r));
    energies.push_back(energy_norm(kern, grid));
  }
  bool ok = true;
  std::ostringstream detail;
  detail << "residuals";
  for (double r : residuals) detail << " " << fmt(r);
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
    ok = ok && residuals[i] / residuals[i + 1] >= 1.5;
  double espread = 0.0;
  for (double e : energies)
    espread = std::max(espread, std::abs(e - energies.back()) / energies.back());
  ok = ok && espread <= 0.05;
  detail << "; energy spread " << fmt(espread);
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

CriterionResult criterion4() {
  CriterionResult c = make_result(4, "pinning restores uniqueness (cov vs fixed point)");
  const double tol = 1e-3;  // run tolerance; pipelines agree within 10 tol
  const Grid grid = build_disk_grid(64, 128);
  ProblemSpec spec;
  spec.drift = DriftSpec{-0.5, 0.0, NoDivfree{}};
  spec.g = annulus_bump();
  spec.pinned = true;

  auto [ucov, rcov] = solve_pinned_cov(spec, grid, tol * 1e-4);
  auto [ufp, rfp] = solve_pinned_fixed_point(spec, grid, tol * 1e-4, 50);
  const double rel =
      energy_norm(subtract(ucov, ufp), grid) / energy_norm(ufp, grid);

  const LinearSystem sys = assemble(spec, grid);
  DiscreteField shifted = ufp;
  const DiscreteField kern = kernel_solution(-0.5, 1.0, grid);
  for (int k = 0; k < grid.node_count; ++k) shifted[k] += kern[k];
  const double res_sol = interior_residual(sys, ufp, grid, 0.0) +
                         std::abs(ufp[0]);  // include the pinned row
  const double res_vio =
      interior_residual(sys, shifted, grid, 0.0) + std::abs(shifted[0]);
  const double ratio = res_vio / res_sol;

  const bool ok = rel <= 10.0 * tol && ucov[0] == 0.0 && ufp[0] == 0.0 &&
                  ratio >= 100.0 && rcov.converged && rfp.converged;
  std::ostringstream detail;
  detail << "energy rel diff " << fmt(rel) << " (<= " << fmt(10.0 * tol)
         << "), u(0) = " << ucov[0] << "/" << ufp[0] << ", violation x"
         << fmt(ratio);
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

CriterionResult criterion5() {
  CriterionResult c = make_result(5, "quadratic-form law B_a[v,v] = kappa a |v(0)|^2");
  std::ostringstream detail;
  bool ok = true;
  double kappa_ref = 0.0;
  bool first = true;
  for (int prof = 0; prof < 2; ++prof) {
    ScalarFn vfn = prof == 0
                       ? ScalarFn{[](double r, double) { return 1.0 - r * r; }}
                       : ScalarFn{[](double r, double) {
                           const double a = 1.0 - r * r;
                           return a * a;
                         }};
    for (double alpha : {1.0, -1.0}) {
      double kappa_by_grid[2] = {0.0, 0.0};
      int gi = 0;
      for (int nr : {64, 128}) {
        const Grid grid = build_disk_grid(nr, 2 * nr);
        const DiscreteField v = sample(grid, vfn);
        const double B =
            bilinear_form_eps_limit(v, v, alpha, NoDivfree{}, grid);
        kappa_by_grid[gi++] = B / alpha;  // v(0) = 1 for both profiles
      }
      const double kappa = kappa_by_grid[1];
      const double stab = std::abs(kappa_by_grid[0] / kappa - 1.0);
      ok = ok && kappa > 0.0 && stab <= 0.05 && kappa >= 2.8 && kappa <= 7.0;
      if (first) {
        kappa_ref = kappa;
        first = false;
      } else {
        ok = ok && std::abs(kappa / kappa_ref - 1.0) <= 0.05;
      }
      detail << "v" << prof << ",a=" << alpha << ": kappa " << fmt(kappa)
             << " (stab " << fmt(stab) << "); ";
    }
  }
  detail << "[pi = " << fmt(std::numbers::pi) << "]";
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

CriterionResult criterion6() {
  CriterionResult c = make_result(6, "energy estimate stability over seeded sources");
  const auto sources = seeded_bump_sources(7, 5);
  const double tol = 1e-9;
  std::vector<std::vector<double>> ratios(2);
  int gi = 0;
  for (int nr : {64, 128}) {
    const Grid grid = build_disk_grid(nr, 2 * nr);
    for (const auto& g : sources) {
      ProblemSpec spec;
      spec.drift = DriftSpec{1.0, 1e-8, NoDivfree{}};
      spec.g = g;
      auto [u, rep] = linear_solve(assemble(spec, grid), tol);

      ProblemSpec pois;
      pois.g = g;
      auto [phi, prep] = linear_solve(assemble(pois, grid), tol);
      const VectorFieldSample gp = discrete_gradient(phi, grid);
      double fnorm2 = 0.0;
      for (int k = 0; k < grid.node_count; ++k)
        fnorm2 += grid.quad_w[k] * (gp.vr[k] * gp.vr[k] + gp.vt[k] * gp.vt[k]);
      ratios[gi].push_back(energy_norm(u, grid) / std::sqrt(fnorm2));
    }
    ++gi;
  }
  bool ok = true;
  double worst = 0.0;
  for (std::size_t s = 0; s < ratios[0].size(); ++s) {
    const double change = std::abs(ratios[0][s] - ratios[1][s]) / ratios[1][s];
    worst = std::max(worst, change);
    ok = ok && change <= 0.15;
  }
  c.passed = ok;
  c.detail = "max per-source ratio change " + fmt(worst) + " (<= 0.15)";
  return c;
}

CriterionResult criterion7() {
  CriterionResult c = make_result(7, "oscillation decay near the origin (pinned alpha < 0)");
  const Grid grid = build_disk_grid(128, 256);
  ProblemSpec spec;
  spec.drift = DriftSpec{-0.5, 0.0, NoDivfree{}};
  spec.g = annulus_bump();
  spec.pinned = true;
  auto [u, rep] = linear_solve(assemble(spec, grid), 1e-10);
  for (int k = 0; k < grid.node_count; ++k)
    if (grid.is_boundary[k]) u[k] = 0.0;
  u[0] = 0.0;

  const double fnorm = lp_norm(sample(grid, spec.g), grid, 2.0);
  const auto ratios = oscillation_contraction(u, grid, 4.0, fnorm);
  double max3 = 0.0;
  for (std::size_t i = ratios.size() >= 3 ? ratios.size() - 3 : 0;
       i < ratios.size(); ++i)
    max3 = std::max(max3, ratios[i].second);
  const double mu = measure(u, grid).fitted_mu;
  const bool ok =
      rep.converged && max3 <= 0.95 && mu >= 0.35 && mu <= 0.65;
  c.passed = ok;
  c.detail = "max contraction ratio (3 smallest R) " + fmt(max3) +
             ", fitted mu " + fmt(mu);
  return c;
}

CriterionResult criterion8() {
  CriterionResult c = make_result(8, "epsilon-continuation Cauchy increments");
  const Grid grid = build_disk_grid(64, 128);
  const ManufacturedProblem mp =
      manufactured(UStarId::OneMinusR2, DriftSpec{1.0, 0.0, NoDivfree{}});
  ProblemSpec spec;
  spec.drift = DriftSpec{1.0, 0.0, NoDivfree{}};
  spec.g = mp.g;
  auto [u, rep] =
      solve_regularized(spec, grid, {1e-1, 1e-2, 1e-3, 1e-4}, 1e-11);
  bool ok = rep.converged && rep.cauchy_increments.size() == 3;
  std::ostringstream detail;
  detail << "increments";
  for (double inc : rep.cauchy_increments) detail << " " << fmt(inc);
  for (std::size_t i = 0; ok && i + 1 < rep.cauchy_increments.size(); ++i)
    ok = rep.cauchy_increments[i] / rep.cauchy_increments[i + 1] >= 1.5;
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

CriterionResult criterion9() {
  CriterionResult c = make_result(9, "drift-field suite (weak-L2 norms, mollification)");
  const Grid grid = build_disk_grid(256, 256);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  std::ostringstream detail;
  bool ok = true;

  const VectorFieldSample singular =
      eval_drift(DriftSpec{-1.0, 1e-6, NoDivfree{}}, grid);
  const double wsing = weak_l2_norm(singular, grid);
  ok = ok && std::abs(wsing / sqrt_pi - 1.0) <= 0.10;
  detail << "|x/|x|^2|_w " << fmt(wsing) << " vs " << fmt(sqrt_pi) << "; ";

  const double beta = 2.0;
  const DriftSpec swirl_spec{0.0, 0.0, Swirl{beta}};
  const double wsw = weak_l2_norm(eval_drift(swirl_spec, grid), grid);
  ok = ok && std::abs(wsw / (beta * sqrt_pi) - 1.0) <= 0.10;
  detail << "swirl(2) " << fmt(wsw) << " vs " << fmt(beta * sqrt_pi) << "; ";

  const DriftSpec unit_swirl{0.0, 0.0, Swirl{1.0}};
  const double wbase = weak_l2_norm(eval_drift(unit_swirl, grid), grid);
  for (double eta : {0.2, 0.1, 0.05}) {
    const VectorFieldSample m = mollify_divfree(unit_swirl, eta, grid);
    const double divmax = sup_norm(discrete_divergence(m, grid));
    const double ratio = weak_l2_norm(m, grid) / wbase;
    ok = ok && divmax <= 1e-8 && ratio <= 3.0;
    detail << "eta " << fmt(eta) << ": div " << fmt(divmax) << ", ratio "
           << fmt(ratio) << "; ";
  }
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

}  // namespace

std::vector<CriterionResult> run_all(std::ostream& out) {
  std::vector<CriterionResult> results;
  const auto t_all = Clock::now();

  const struct {
    CriterionResult (*fn)();
    double budget_s;  // per-criterion runtime bound, where the contract has one
  } items[] = {
      {criterion1, 60.0}, {criterion2, 0.0}, {criterion3, 0.0},
      {criterion4, 0.0},  {criterion5, 0.0}, {criterion6, 0.0},
      {criterion7, 60.0}, {criterion8, 0.0}, {criterion9, 0.0},
  };

  for (const auto& item : items) {
    const auto t0 = Clock::now();
    CriterionResult r = item.fn();
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (item.budget_s > 0.0 && r.seconds > item.budget_s) {
      r.passed = false;
      r.detail += " [over runtime budget " + fmt(item.budget_s) + "s]";
    }
    out << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": "
        << r.name << " — " << r.detail << " (" << fmt(r.seconds) << "s)\n";
    results.push_back(std::move(r));
  }

  CriterionResult c10 = make_result(10, "end-to-end verify under 10 minutes");
  c10.seconds = std::chrono::duration<double>(Clock::now() - t_all).count();
  c10.passed = c10.seconds <= 600.0 && all_passed(results);
  c10.detail = "total " + fmt(c10.seconds) + "s, criteria 1-9 " +
               (all_passed(results) ? "all green" : "NOT all green");
  out << (c10.passed ? "PASS" : "FAIL") << " criterion 10: " << c10.name
      << " — " << c10.detail << "\n";
  results.push_back(c10);
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace sdlab::acceptance
