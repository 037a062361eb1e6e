#include "sdlab/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdlab/kernels.hpp"

namespace sdlab {

namespace {

struct RowBuilder {
  std::vector<std::pair<int, double>> entries;

  void add(int col, double v) {
    for (auto& e : entries) {
      if (e.first == col) {
        e.second += v;
        return;
      }
    }
    entries.emplace_back(col, v);
  }
  void flush(CsrMatrix& m) {
    std::sort(entries.begin(), entries.end());
    for (const auto& [c, v] : entries) {
      m.col.push_back(c);
      m.val.push_back(v);
    }
    m.row_ptr.push_back(static_cast<int>(m.col.size()));
    entries.clear();
  }
};

void check_drift_usable(const ProblemSpec& spec) {
  if (spec.drift.epsilon == 0.0 && spec.drift.alpha != 0.0 && !spec.pinned)
    throw std::invalid_argument(
        "assemble: epsilon = 0 with alpha != 0 requires a pinned system");
}

}  // namespace

DiscreteField sample(const Grid& grid, const ScalarFn& fn) {
  DiscreteField out(grid.node_count);
  for (int k = 0; k < grid.node_count; ++k)
    out[k] = fn(grid.r[k], grid.theta[k]);
  return out;
}

std::vector<double> assemble_rhs(const ProblemSpec& spec, const Grid& grid) {
  std::vector<double> rhs(grid.node_count, 0.0);
  if (spec.rhs_mode == RhsMode::ScalarG) {
    if (!spec.g) throw std::invalid_argument("assemble_rhs: missing g profile");
    for (int k = 0; k < grid.node_count; ++k) {
      if (grid.is_boundary[k]) continue;
      if (k == 0 && spec.pinned) continue;
      rhs[k] = grid.quad_w[k] * spec.g(grid.r[k], grid.theta[k]);
    }
  } else {
    if (!spec.f.fr || !spec.f.ft)
      throw std::invalid_argument("assemble_rhs: missing f profile");
    VectorFieldSample fs(grid.node_count);
    for (int k = 1; k < grid.node_count; ++k) {
      fs.vr[k] = spec.f.fr(grid.r[k], grid.theta[k]);
      fs.vt[k] = spec.f.ft(grid.r[k], grid.theta[k]);
    }
    const DiscreteField divf = discrete_divergence(fs, grid);
    // -div f via the same centered stencils the operator uses; the center row
    // gets 0, which requires f to vanish near the origin (our f catalog does).
    for (int k = 1; k < grid.node_count; ++k) {
      if (grid.is_boundary[k]) continue;
      rhs[k] = -grid.quad_w[k] * divf[k];
    }
  }
  return rhs;
}

LinearSystem assemble(const ProblemSpec& spec, const Grid& grid) {
  check_drift_usable(spec);
  const bool radial_exact = (spec.drift.epsilon == 0.0 && spec.drift.alpha != 0.0);
  const VectorFieldSample b = eval_drift(spec.drift, grid, radial_exact);

  LinearSystem sys;
  sys.pinned = spec.pinned;
  sys.scheme = spec.scheme;
  sys.A.n = grid.node_count;
  sys.A.row_ptr.reserve(grid.node_count + 1);
  sys.A.row_ptr.push_back(0);
  sys.rhs = assemble_rhs(spec, grid);

  const double hr = grid.h_r, ht = grid.h_theta;
  RowBuilder row;

  // center row
  if (spec.pinned) {
    row.add(0, 1.0);
    sys.rhs[0] = 0.0;
  } else {
    // -Delta u(0) ~ 4 (u_c - mean of first ring) / h_r^2, scaled by the
    // center weight; the drift contributes nothing at the center (the
    // regularized singular part vanishes there).
    const double w0 = grid.quad_w[0];
    row.add(0, w0 * 4.0 / (hr * hr));
    const double cring = -w0 * 4.0 / (hr * hr * grid.n_theta);
    for (int j = 0; j < grid.n_theta; ++j) row.add(grid.index(1, j), cring);
  }
  row.flush(sys.A);

  for (int i = 1; i <= grid.n_r; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      const int k = grid.index(i, j);
      if (grid.is_boundary[k]) {
        row.add(k, 1.0);
        sys.rhs[k] = 0.0;
        row.flush(sys.A);
        continue;
      }
      const double r = grid.r[k];
      const double w = grid.quad_w[k];
      const int in = (i == 1) ? 0 : grid.index(i - 1, j);
      const int out = grid.index(i + 1, j);
      const int left = grid.angle_neighbor(k, -1);
      const int right = grid.angle_neighbor(k, 1);

      // -(u_rr + u_r / r)
      row.add(k, w * 2.0 / (hr * hr));
      row.add(out, -w * (1.0 / (hr * hr) + 1.0 / (2.0 * hr * r)));
      row.add(in, -w * (1.0 / (hr * hr) - 1.0 / (2.0 * hr * r)));
      // -u_tt / r^2
      row.add(k, w * 2.0 / (r * r * ht * ht));
      row.add(left, -w / (r * r * ht * ht));
      row.add(right, -w / (r * r * ht * ht));

      const double br = b.vr[k];
      const double bt_over_r = b.vt[k] / r;
      if (spec.scheme == Scheme::Centered) {
        row.add(out, w * br / (2.0 * hr));
        row.add(in, -w * br / (2.0 * hr));
        row.add(right, w * bt_over_r / (2.0 * ht));
        row.add(left, -w * bt_over_r / (2.0 * ht));
      } else {
        if (br >= 0.0) {
          row.add(k, w * br / hr);
          row.add(in, -w * br / hr);
        } else {
          row.add(out, w * br / hr);
          row.add(k, -w * br / hr);
        }
        if (bt_over_r >= 0.0) {
          row.add(k, w * bt_over_r / ht);
          row.add(left, -w * bt_over_r / ht);
        } else {
          row.add(right, w * bt_over_r / ht);
          row.add(k, -w * bt_over_r / ht);
        }
      }
      row.flush(sys.A);
    }
  }
  return sys;
}

VectorFieldSample discrete_gradient(const DiscreteField& u, const Grid& grid) {
  if (u.size() != grid.node_count)
    throw std::invalid_argument("discrete_gradient: field/grid size mismatch");
  VectorFieldSample g(grid.node_count);
  const double hr = grid.h_r, ht = grid.h_theta;

  // first-harmonic fit over ring 1 for the center gradient magnitude
  double gx = 0.0, gy = 0.0;
  for (int j = 0; j < grid.n_theta; ++j) {
    const double uj = u[grid.index(1, j)];
    gx += uj * std::cos(j * ht);
    gy += uj * std::sin(j * ht);
  }
  gx *= 2.0 / (grid.n_theta * hr);
  gy *= 2.0 / (grid.n_theta * hr);
  g.vr[0] = std::hypot(gx, gy);

  for (int i = 1; i <= grid.n_r; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      const int k = grid.index(i, j);
      const double inner = (i == 1) ? u[0] : u[grid.index(i - 1, j)];
      if (i < grid.n_r)
        g.vr[k] = (u[grid.index(i + 1, j)] - inner) / (2.0 * hr);
      else
        g.vr[k] = (u[k] - inner) / hr;
      g.vt[k] = (u[grid.angle_neighbor(k, 1)] - u[grid.angle_neighbor(k, -1)]) /
                (2.0 * ht * grid.r[k]);
    }
  }
  return g;
}

double energy_norm(const DiscreteField& u, const Grid& grid) {
  const VectorFieldSample g = discrete_gradient(u, grid);
  double s = 0.0;
  for (int k = 0; k < grid.node_count; ++k) {
    const double g2 = g.vr[k] * g.vr[k] + g.vt[k] * g.vt[k];
    s += grid.quad_w[k] * (g2 + u[k] * u[k]);
  }
  return std::sqrt(s);
}

double bilinear_form(const DiscreteField& u, const DiscreteField& eta,
                     const DriftSpec& spec, const Grid& grid) {
  if (u.size() != grid.node_count || eta.size() != grid.node_count)
    throw std::invalid_argument("bilinear_form: field/grid size mismatch");
  if (spec.epsilon <= 0.0 && spec.alpha != 0.0)
    throw std::invalid_argument("bilinear_form: needs epsilon > 0 when alpha != 0");

  const VectorFieldSample b = eval_drift(spec, grid);
  const VectorFieldSample g = discrete_gradient(u, grid);
  double s = 0.0;
  for (int k = 1; k < grid.node_count; ++k)
    s += grid.quad_w[k] * (b.vr[k] * g.vr[k] + b.vt[k] * g.vt[k]) * eta[k];
  return s;  // center omitted: the regularized drift vanishes there
}

double bilinear_form_eps_limit(const DiscreteField& u, const DiscreteField& eta,
                               double alpha, const DivfreePart& divfree,
                               const Grid& grid) {
  double divfree_part = 0.0;
  if (!std::holds_alternative<NoDivfree>(divfree)) {
    DriftSpec ds{0.0, 0.0, divfree};
    divfree_part = bilinear_form(u, eta, ds, grid);
  }
  if (alpha == 0.0) return divfree_part;

  double prev = 0.0;
  bool have_prev = false;
  for (double eps = 1e-1; eps >= 1e-9; eps *= 0.1) {
    DriftSpec ds{alpha, eps, NoDivfree{}};
    const double val = bilinear_form(u, eta, ds, grid);
    if (have_prev && std::abs(val - prev) <= 1e-7 * std::max(1.0, std::abs(val)))
      return val + divfree_part;
    prev = val;
    have_prev = true;
  }
  return prev + divfree_part;
}

double interior_residual(const LinearSystem& sys, const DiscreteField& u,
                         const Grid& grid, double r_min) {
  if (u.size() != sys.A.n || sys.A.n != grid.node_count)
    throw std::invalid_argument("interior_residual: size mismatch");
  std::vector<double> Au(sys.A.n);
  kernels::spmv(sys.A.n, sys.A.row_ptr.data(), sys.A.col.data(),
                sys.A.val.data(), u.v.data(), Au.data());
  double s = 0.0;
  for (int k = 1; k < grid.node_count; ++k) {
    if (grid.is_boundary[k] || grid.r[k] < r_min) continue;
    const double res = Au[k] - sys.rhs[k];
    s += res * res;
  }
  return std::sqrt(s);
}

}  // namespace sdlab
