#include "sdlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdlab {

namespace {

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

int max_dyadic_level(const Grid& grid) {
  // largest k with 2^-k >= 4 h_r
  return static_cast<int>(std::floor(std::log2(grid.n_r / 4.0)));
}

std::vector<std::pair<double, double>> osc_levels(const DiscreteField& u,
                                                  const Grid& grid, int kmax) {
  std::vector<std::pair<double, double>> table;
  for (int k = 0; k <= kmax; ++k) {
    const double R = std::ldexp(1.0, -k);
    double lo = u[0], hi = u[0];
    for (int node = 1; node < grid.node_count; ++node) {
      if (grid.r[node] <= R * (1.0 + 1e-12)) {
        lo = std::min(lo, u[node]);
        hi = std::max(hi, u[node]);
      }
    }
    table.emplace_back(R, hi - lo);
  }
  return table;
}

}  // namespace

DiscreteField kernel_solution(double alpha, double c, const Grid& grid) {
  if (alpha >= 0.0)
    throw std::invalid_argument("kernel_solution: requires alpha < 0");
  const double m = -alpha;
  DiscreteField u(grid.node_count);
  u[0] = -c;
  for (int k = 1; k < grid.node_count; ++k)
    u[k] = c * (std::pow(grid.r[k], m) - 1.0);
  for (int k = 0; k < grid.node_count; ++k)
    if (grid.is_boundary[k]) u[k] = 0.0;  // r = 1 exactly
  return u;
}

DiscreteField radial_family(double alpha, double c1, double c2,
                            const Grid& grid) {
  if (c1 != 0.0 && alpha >= 0.0)
    throw std::invalid_argument(
        "radial_family: formula diverges at the center for alpha >= 0 with "
        "c1 != 0");
  DiscreteField u(grid.node_count);
  u[0] = c2;  // alpha < 0: r^|alpha| -> 0; c1 == 0: constant
  for (int k = 1; k < grid.node_count; ++k) {
    const double r = grid.r[k];
    u[k] = (alpha != 0.0) ? c1 * std::pow(r, -alpha) + c2
                          : c1 * std::log(r) + c2;
  }
  return u;
}

ManufacturedProblem manufactured(UStarId id, const DriftSpec& spec) {
  const bool b_ok = std::holds_alternative<NoDivfree>(spec.divfree) ||
                    std::holds_alternative<Swirl>(spec.divfree);
  if (!b_ok)
    throw std::invalid_argument(
        "manufactured: catalog covers b = 0 or swirl only");
  const double a = spec.alpha;

  ManufacturedProblem out;
  switch (id) {
    case UStarId::OneMinusR2:
      // u' = -2r, u'' = -2; g = -u'' - (1+a) u'/r = 4 + 2a
      out.u_exact = [](double r, double) { return 1.0 - r * r; };
      out.g = [a](double, double) { return 4.0 + 2.0 * a; };
      out.vanishes_at_origin = false;
      return out;
    case UStarId::R2OneMinusR:
      // u = r^2 - r^3; g = -(2 - 6r) - (1+a)(2 - 3r)
      out.u_exact = [](double r, double) { return r * r * (1.0 - r); };
      out.g = [a](double r, double) {
        return -(2.0 - 6.0 * r) - (1.0 + a) * (2.0 - 3.0 * r);
      };
      out.vanishes_at_origin = true;
      return out;
    case UStarId::RPowOnePlusMOneMinusR: {
      // u = r^(1+m)(1-r), m = |alpha|;
      // g = -(1+m) r^(m-1) + 2 (2+m) r^m   (for alpha = -m; see tests)
      const double m = std::abs(a);
      if (a > 0.0)
        throw std::invalid_argument(
            "manufactured: RPowOnePlusMOneMinusR is the pinned alpha <= 0 "
            "profile");
      out.u_exact = [m](double r, double) {
        return std::pow(r, 1.0 + m) * (1.0 - r);
      };
      out.g = [m](double r, double) {
        if (r == 0.0) {
          if (m > 1.0) return 0.0;
          if (m == 1.0) return -2.0;
          return 0.0;  // divergent limit; pinned assemblies never read it
        }
        return -(1.0 + m) * std::pow(r, m - 1.0) +
               2.0 * (2.0 + m) * std::pow(r, m);
      };
      out.vanishes_at_origin = true;
      return out;
    }
  }
  throw std::logic_error("manufactured: unknown profile");
}

EstimateReport measure(const DiscreteField& u, const Grid& grid) {
  if (u.size() != grid.node_count)
    throw std::invalid_argument("measure: field/grid size mismatch");
  const int kmax = max_dyadic_level(grid);
  if (kmax < 2)
    throw std::invalid_argument("measure: grid too coarse for 3 osc radii");

  EstimateReport rep;
  rep.energy_norm = energy_norm(u, grid);
  rep.sup_norm = sup_norm(u);
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    const VectorFieldSample g = discrete_gradient(u, grid);
    double s = 0.0;
    for (int k = 0; k < grid.node_count; ++k)
      s += grid.quad_w[k] * std::pow(std::hypot(g.vr[k], g.vt[k]), p);
    rep.grad_lp[p] = std::pow(s, 1.0 / p);
  }
  rep.osc_table = osc_levels(u, grid, kmax);

  // mu-fit over the 4 smallest usable radii (boundary layers stay out)
  std::vector<double> lx, ly;
  for (auto it = rep.osc_table.rbegin();
       it != rep.osc_table.rend() && lx.size() < 4; ++it) {
    if (it->second > 0.0) {
      lx.push_back(std::log(it->first));
      ly.push_back(std::log(it->second));
    }
  }
  if (lx.size() >= 2)
    rep.fitted_mu = std::clamp(ls_slope(lx, ly), 0.0, 1.5);
  return rep;
}

std::vector<std::pair<double, double>> oscillation_contraction(
    const DiscreteField& u, const Grid& grid, double q, double f_norm) {
  if (q <= 2.0)
    throw std::invalid_argument("oscillation_contraction: q must be > 2");
  if (f_norm < 0.0)
    throw std::invalid_argument("oscillation_contraction: f_norm >= 0");
  const int kmax = max_dyadic_level(grid);
  if (kmax < 3)
    throw std::invalid_argument(
        "oscillation_contraction: needs >= 4 dyadic radii");

  const auto table = osc_levels(u, grid, kmax);
  std::vector<std::pair<double, double>> out;
  const double floor = 10.0 * std::numeric_limits<double>::epsilon();
  for (int k = 1; k + 1 <= kmax; ++k) {
    const double osc2R = table[k - 1].second;
    const double oschalf = table[k + 1].second;
    if (osc2R > floor) out.emplace_back(table[k].first, oschalf / osc2R);
  }
  return out;
}

double fit_convergence_order(const std::vector<double>& errors,
                             const std::vector<double>& h_values) {
  if (errors.size() != h_values.size() || errors.size() < 3)
    throw std::invalid_argument("fit_convergence_order: needs >= 3 pairs");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] <= 0.0)
      throw std::invalid_argument("fit_convergence_order: errors must be > 0");
    if (i + 1 < h_values.size() && h_values[i + 1] >= h_values[i])
      throw std::invalid_argument("fit_convergence_order: h must decrease");
  }
  std::vector<double> lx(h_values.size()), ly(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    lx[i] = std::log(h_values[i]);
    ly[i] = std::log(errors[i]);
  }
  return ls_slope(lx, ly);
}

double lp_norm(const DiscreteField& u, const Grid& grid, double p) {
  double s = 0.0;
  for (int k = 0; k < grid.node_count; ++k)
    s += grid.quad_w[k] * std::pow(std::abs(u[k]), p);
  return std::pow(s, 1.0 / p);
}

double sup_norm(const DiscreteField& u) {
  double m = 0.0;
  for (double v : u.v) m = std::max(m, std::abs(v));
  return m;
}

double sup_diff(const DiscreteField& a, const DiscreteField& b) {
  double m = 0.0;
  for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

DiscreteField subtract(const DiscreteField& a, const DiscreteField& b) {
  DiscreteField out(a.size());
  for (int k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

}  // namespace sdlab
