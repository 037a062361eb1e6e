#include "sdlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sdlab/kernels.hpp"
#include "sdlab/svg.hpp"

namespace sdlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double grad_l2(const DiscreteField& u, const Grid& grid) {
  const VectorFieldSample g = discrete_gradient(u, grid);
  double s = 0.0;
  for (int k = 0; k < grid.node_count; ++k)
    s += grid.quad_w[k] * (g.vr[k] * g.vr[k] + g.vt[k] * g.vt[k]);
  return std::sqrt(s);
}

fs::path run_dir(const ExperimentConfig& c) {
  return fs::path(c.output_dir) / c.name;
}

// ---- suite implementations -------------------------------------------------

void run_convergence(const ExperimentConfig& c, RunRecord& rec,
                     std::vector<PlotSeries>& plots) {
  const ManufacturedProblem mp =
      manufactured(UStarId::OneMinusR2, DriftSpec{c.alpha, 0.0, NoDivfree{}});
  std::vector<double> hs, esup, eenergy;
  for (auto [nr, nt] : c.grids) {
    const Grid grid = build_disk_grid(nr, nt);
    ProblemSpec spec;
    spec.drift = DriftSpec{c.alpha, c.alpha == 0.0 ? 0.0 : 1e-10, NoDivfree{}};
    spec.g = mp.g;
    spec.q = c.q;
    spec.scheme = c.scheme;
    const LinearSystem sys = assemble(spec, grid);
    auto [u, srep] = linear_solve(sys, c.tol);
    const DiscreteField uex = sample(grid, mp.u_exact);
    hs.push_back(grid.h_r);
    esup.push_back(sup_diff(u, uex));
    eenergy.push_back(energy_norm(subtract(u, uex), grid));

    GridReport gr{nr, nt, measure(u, grid), srep};
    if (hs.size() >= 2) {
      std::vector<double> e(esup.begin(), esup.end()), h(hs.begin(), hs.end());
      for (double& x : e) x = std::max(x, 1e-16);
      gr.estimate.fitted_order =
          (e.size() == 2)
              ? std::log(e[0] / e[1]) / std::log(h[0] / h[1])
              : fit_convergence_order(e, h);
    }
    rec.reports.push_back(std::move(gr));
  }
  std::vector<double> esup_f(esup), eenergy_f(eenergy);
  for (double& x : esup_f) x = std::max(x, 1e-16);
  for (double& x : eenergy_f) x = std::max(x, 1e-16);
  if (hs.size() >= 3) {
    rec.metrics["order_sup"] = fit_convergence_order(esup_f, hs);
    rec.metrics["order_energy"] = fit_convergence_order(eenergy_f, hs);
  }
  for (std::size_t i = 0; i < hs.size(); ++i) {
    rec.metrics["error_sup_" + std::to_string(i)] = esup[i];
    rec.metrics["error_energy_" + std::to_string(i)] = eenergy[i];
  }
  PlotSeries s1{"sup error", {}}, s2{"energy error", {}};
  for (std::size_t i = 0; i < hs.size(); ++i) {
    s1.points.emplace_back(hs[i], esup[i]);
    s2.points.emplace_back(hs[i], eenergy[i]);
  }
  plots = {s1, s2};
}

void run_nonuniqueness(const ExperimentConfig& c, RunRecord& rec,
                       std::vector<PlotSeries>& plots) {
  PlotSeries s{"kernel residual", {}};
  std::vector<double> residuals;
  for (auto [nr, nt] : c.grids) {
    const Grid grid = build_disk_grid(nr, nt);
    ProblemSpec spec;
    spec.drift = DriftSpec{c.alpha, 1e-12, NoDivfree{}};
    spec.g = [](double, double) { return 0.0; };
    spec.scheme = c.scheme;
    const LinearSystem sys = assemble(spec, grid);
    const DiscreteField kern = kernel_solution(c.alpha, 1.0, grid);
    const double res = interior_residual(sys, kern, grid, 2.0 * grid.h_r);
    residuals.push_back(res);
    GridReport gr{nr, nt, measure(kern, grid), SolveReport{}};
    rec.reports.push_back(std::move(gr));
    rec.metrics["kernel_residual_" + std::to_string(residuals.size() - 1)] = res;
    s.points.emplace_back(grid.h_r, res);
  }
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
    rec.metrics["residual_ratio_" + std::to_string(i)] =
        residuals[i] / residuals[i + 1];
  plots = {s};
}

void run_pinning_equivalence(const ExperimentConfig& c, RunRecord& rec,
                             std::vector<PlotSeries>& plots) {
  const auto [nr, nt] = c.grids.front();
  const Grid grid = build_disk_grid(nr, nt);
  ProblemSpec spec;
  spec.drift = DriftSpec{c.alpha, 0.0, NoDivfree{}};
  spec.g = annulus_bump();
  spec.q = c.q;
  spec.pinned = true;
  spec.scheme = c.scheme;

  auto [ucov, rcov] = solve_pinned_cov(spec, grid, c.tol);
  auto [ufp, rfp] = solve_pinned_fixed_point(spec, grid, c.tol, 50);

  const double efp = energy_norm(ufp, grid);
  rec.metrics["energy_rel_diff"] = energy_norm(subtract(ucov, ufp), grid) / efp;
  rec.metrics["u_center_cov"] = ucov[0];
  rec.metrics["u_center_fp"] = ufp[0];

  const LinearSystem sys = assemble(spec, grid);
  std::vector<double> Au(sys.A.n);
  auto full_res = [&](const DiscreteField& u) {
    kernels::spmv(sys.A.n, sys.A.row_ptr.data(), sys.A.col.data(),
                  sys.A.val.data(), u.v.data(), Au.data());
    double ssum = 0.0;
    for (int k = 0; k < sys.A.n; ++k) {
      const double r = Au[k] - sys.rhs[k];
      ssum += r * r;
    }
    return std::sqrt(ssum);
  };
  const double res_sol = full_res(ufp);
  DiscreteField shifted = ufp;
  const DiscreteField kern = kernel_solution(c.alpha, 1.0, grid);
  for (int k = 0; k < grid.node_count; ++k) shifted[k] += kern[k];
  rec.metrics["residual_solution"] = res_sol;
  rec.metrics["residual_with_kernel"] = full_res(shifted);
  rec.metrics["violation_ratio"] = full_res(shifted) / res_sol;

  rec.reports.push_back(GridReport{nr, nt, measure(ufp, grid), rfp});
  rec.reports.push_back(GridReport{nr, nt, measure(ucov, grid), rcov});

  PlotSeries s{"|u_fp| vs r (ring max)", {}};
  for (int i = 1; i <= grid.n_r; ++i) {
    double m = 0.0;
    for (int j = 0; j < grid.n_theta; ++j)
      m = std::max(m, std::abs(ufp[grid.index(i, j)]));
    if (m > 0.0) s.points.emplace_back(i * grid.h_r, m);
  }
  plots = {s};
}

void run_oscillation(const ExperimentConfig& c, RunRecord& rec,
                     std::vector<PlotSeries>& plots) {
  const auto [nr, nt] = c.grids.front();
  const Grid grid = build_disk_grid(nr, nt);
  ProblemSpec spec;
  spec.drift = DriftSpec{c.alpha, 0.0, NoDivfree{}};
  spec.g = annulus_bump();
  spec.q = c.q;
  spec.pinned = true;
  spec.scheme = c.scheme;
  const LinearSystem sys = assemble(spec, grid);
  auto [u, srep] = linear_solve(sys, c.tol);
  for (int k = 0; k < grid.node_count; ++k)
    if (grid.is_boundary[k]) u[k] = 0.0;
  u[0] = 0.0;

  const double fnorm = lp_norm(sample(grid, spec.g), grid, 2.0);
  const auto ratios = oscillation_contraction(u, grid, c.q, fnorm);
  GridReport gr{nr, nt, measure(u, grid), srep};
  rec.metrics["fitted_mu"] = gr.estimate.fitted_mu;
  double max3 = 0.0;
  for (std::size_t i = ratios.size() >= 3 ? ratios.size() - 3 : 0;
       i < ratios.size(); ++i)
    max3 = std::max(max3, ratios[i].second);
  rec.metrics["max_ratio_3_smallest"] = max3;
  for (std::size_t i = 0; i < ratios.size(); ++i)
    rec.metrics["ratio_R_" + fmt(ratios[i].first)] = ratios[i].second;

  PlotSeries s{"osc(B_R)", {}};
  for (const auto& [R, osc] : gr.estimate.osc_table)
    if (osc > 0.0) s.points.emplace_back(R, osc);
  plots = {s};
  rec.reports.push_back(std::move(gr));
}

void run_energy_stability(const ExperimentConfig& c, RunRecord& rec,
                          std::vector<PlotSeries>& plots) {
  const auto sources = seeded_bump_sources(c.seed, 5);
  std::vector<std::vector<double>> ratios(c.grids.size());
  for (std::size_t gi = 0; gi < c.grids.size(); ++gi) {
    const auto [nr, nt] = c.grids[gi];
    const Grid grid = build_disk_grid(nr, nt);
    SolveReport last;
    for (std::size_t si = 0; si < sources.size(); ++si) {
      ProblemSpec spec;
      spec.drift = DriftSpec{c.alpha, c.alpha == 0.0 ? 0.0 : 1e-8, NoDivfree{}};
      spec.g = sources[si];
      spec.q = c.q;
      spec.scheme = c.scheme;
      const LinearSystem sys = assemble(spec, grid);
      auto [u, rep] = linear_solve(sys, c.tol);

      ProblemSpec pois = spec;
      pois.drift = DriftSpec{};
      const LinearSystem psys = assemble(pois, grid);
      auto [phi, prep] = linear_solve(psys, c.tol);

      const double ratio = energy_norm(u, grid) / grad_l2(phi, grid);
      ratios[gi].push_back(ratio);
      rec.metrics["ratio_g" + std::to_string(gi) + "_s" + std::to_string(si)] =
          ratio;
      last = rep;
      if (si == 0)
        rec.reports.push_back(GridReport{nr, nt, measure(u, grid), rep});
    }
  }
  if (c.grids.size() >= 2) {
    const auto& a = ratios[c.grids.size() - 2];
    const auto& b = ratios[c.grids.size() - 1];
    double worst = 0.0;
    for (std::size_t si = 0; si < a.size(); ++si)
      worst = std::max(worst, std::abs(a[si] - b[si]) / b[si]);
    rec.metrics["max_ratio_change"] = worst;
  }
  PlotSeries s{"ratio per source (finest grid)", {}};
  for (std::size_t si = 0; si < ratios.back().size(); ++si)
    s.points.emplace_back(si + 1.0, ratios.back()[si]);
  plots = {s};
}

void run_drift_norms(const ExperimentConfig& c, RunRecord& rec,
                     std::vector<PlotSeries>& plots) {
  const auto [nr, nt] = c.grids.front();
  const Grid grid = build_disk_grid(nr, nt);

  const VectorFieldSample singular =
      eval_drift(DriftSpec{-1.0, 1e-6, NoDivfree{}}, grid);
  rec.metrics["weak_l2_singular"] = weak_l2_norm(singular, grid);

  const DriftSpec swirl{0.0, 0.0, Swirl{c.beta}};
  const VectorFieldSample sw = eval_drift(swirl, grid);
  const double wnorm = weak_l2_norm(sw, grid);
  rec.metrics["weak_l2_swirl"] = wnorm;

  PlotSeries s{"weak-L2 of mollified swirl", {}};
  for (double eta : {0.2, 0.1, 0.05}) {
    const VectorFieldSample m = mollify_divfree(swirl, eta, grid);
    const DiscreteField div = discrete_divergence(m, grid);
    const double wm = weak_l2_norm(m, grid);
    rec.metrics["weak_l2_mollified_eta_" + fmt(eta)] = wm;
    rec.metrics["norm_ratio_eta_" + fmt(eta)] = wm / wnorm;
    rec.metrics["max_div_eta_" + fmt(eta)] = sup_norm(div);
    s.points.emplace_back(eta, wm);
  }
  rec.reports.push_back(GridReport{nr, nt, EstimateReport{}, SolveReport{}});
  plots = {s};
}

void run_epsilon_continuation(const ExperimentConfig& c, RunRecord& rec,
                              std::vector<PlotSeries>& plots) {
  const auto [nr, nt] = c.grids.front();
  const Grid grid = build_disk_grid(nr, nt);
  const ManufacturedProblem mp =
      manufactured(UStarId::OneMinusR2, DriftSpec{c.alpha, 0.0, NoDivfree{}});
  ProblemSpec spec;
  spec.drift = DriftSpec{c.alpha, 0.0, NoDivfree{}};
  spec.g = mp.g;
  spec.q = c.q;
  spec.scheme = c.scheme;
  auto [u, rep] = solve_regularized(spec, grid, default_eps_schedule(), c.tol);
  for (std::size_t i = 0; i < rep.cauchy_increments.size(); ++i)
    rec.metrics["increment_" + std::to_string(i)] = rep.cauchy_increments[i];
  double worst = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i + 1 < rep.cauchy_increments.size(); ++i)
    worst = std::min(worst,
                     rep.cauchy_increments[i] / rep.cauchy_increments[i + 1]);
  if (rep.cauchy_increments.size() >= 2)
    rec.metrics["min_increment_ratio"] = worst;
  rec.reports.push_back(GridReport{nr, nt, measure(u, grid), rep});

  PlotSeries s{"Cauchy increment", {}};
  for (std::size_t i = 0; i < rep.cauchy_increments.size(); ++i)
    s.points.emplace_back(rep.epsilon_schedule[i + 1], rep.cauchy_increments[i]);
  plots = {s};
}

void validate(const ExperimentConfig& c) {
  if (c.name.empty()) throw ConfigError("config: name required");
  if (c.grids.empty()) throw ConfigError("config: at least one grid required");
  if (c.tol <= 0.0 || c.tol > 1e-2)
    throw ConfigError("config: tol must be in (0, 1e-2]");
  if (c.q <= 2.0) throw ConfigError("config: q must be > 2");
  switch (c.suite) {
    case Suite::Nonuniqueness:
    case Suite::PinningEquivalence:
    case Suite::Oscillation:
      if (c.alpha >= 0.0)
        throw ConfigError("config: this suite requires alpha < 0");
      break;
    case Suite::Convergence:
    case Suite::EnergyStability:
    case Suite::EpsilonContinuation:
      if (c.alpha < 0.0)
        throw ConfigError("config: this suite requires alpha >= 0");
      break;
    case Suite::DriftNorms:
      if (c.beta <= 0.0) throw ConfigError("config: drift_norms needs beta > 0");
      break;
  }
}

// ---- serialization ---------------------------------------------------------

json estimate_to_json(const EstimateReport& e) {
  json j;
  j["energy_norm"] = e.energy_norm;
  j["sup_norm"] = e.sup_norm;
  json lp = json::array();
  for (const auto& [p, v] : e.grad_lp) lp.push_back({p, v});
  j["grad_lp"] = lp;
  json osc = json::array();
  for (const auto& [R, o] : e.osc_table) osc.push_back({R, o});
  j["osc_table"] = osc;
  j["fitted_mu"] = e.fitted_mu;
  j["fitted_order"] = e.fitted_order;
  return j;
}

EstimateReport estimate_from_json(const json& j) {
  EstimateReport e;
  e.energy_norm = j.at("energy_norm");
  e.sup_norm = j.at("sup_norm");
  for (const auto& kv : j.at("grad_lp"))
    e.grad_lp[kv.at(0).get<double>()] = kv.at(1).get<double>();
  for (const auto& kv : j.at("osc_table"))
    e.osc_table.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
  e.fitted_mu = j.at("fitted_mu");
  e.fitted_order = j.at("fitted_order");
  return e;
}

json solve_to_json(const SolveReport& s) {
  return json{{"iterations", s.iterations},
              {"final_residual", s.final_residual},
              {"epsilon_schedule", s.epsilon_schedule},
              {"fixed_point_iters", s.fixed_point_iters},
              {"converged", s.converged},
              {"cauchy_increments", s.cauchy_increments}};
}

SolveReport solve_from_json(const json& j) {
  SolveReport s;
  s.iterations = j.at("iterations");
  s.final_residual = j.at("final_residual");
  s.epsilon_schedule = j.at("epsilon_schedule").get<std::vector<double>>();
  s.fixed_point_iters = j.at("fixed_point_iters");
  s.converged = j.at("converged");
  s.cauchy_increments = j.at("cauchy_increments").get<std::vector<double>>();
  return s;
}

json config_to_json(const ExperimentConfig& c) {
  json grids = json::array();
  for (auto [nr, nt] : c.grids) grids.push_back({nr, nt});
  return json{{"name", c.name},
              {"suite", suite_name(c.suite)},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"grids", grids},
              {"scheme", c.scheme == Scheme::Centered ? "centered" : "upwind"},
              {"tol", c.tol},
              {"q", c.q},
              {"seed", c.seed},
              {"output_dir", c.output_dir}};
}

}  // namespace

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::Convergence: return "convergence";
    case Suite::Nonuniqueness: return "nonuniqueness";
    case Suite::PinningEquivalence: return "pinning_equivalence";
    case Suite::Oscillation: return "oscillation";
    case Suite::EnergyStability: return "energy_stability";
    case Suite::DriftNorms: return "drift_norms";
    case Suite::EpsilonContinuation: return "epsilon_continuation";
  }
  throw std::logic_error("suite_name: bad suite");
}

Suite suite_from_name(const std::string& name) {
  for (Suite s : {Suite::Convergence, Suite::Nonuniqueness,
                  Suite::PinningEquivalence, Suite::Oscillation,
                  Suite::EnergyStability, Suite::DriftNorms,
                  Suite::EpsilonContinuation})
    if (suite_name(s) == name) return s;
  throw ConfigError("unknown suite: " + name);
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    ExperimentConfig c;
    c.name = j.at("name").get<std::string>();
    c.suite = suite_from_name(j.at("suite").get<std::string>());
    c.alpha = j.value("alpha", 0.0);
    c.beta = j.value("beta", 0.0);
    if (j.contains("grids")) {
      for (const auto& g : j.at("grids"))
        c.grids.emplace_back(g.at(0).get<int>(), g.at(1).get<int>());
    } else {
      c.grids = {{32, 64}, {64, 128}};
    }
    const std::string scheme = j.value("scheme", std::string("centered"));
    if (scheme == "centered")
      c.scheme = Scheme::Centered;
    else if (scheme == "upwind")
      c.scheme = Scheme::Upwind;
    else
      throw ConfigError("unknown scheme: " + scheme);
    c.tol = j.value("tol", 1e-8);
    c.q = j.value("q", 4.0);
    c.seed = j.value("seed", std::uint64_t{1});
    c.output_dir = j.value("output_dir", std::string("out"));
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json_text(ss.str());
}

RunRecord run(const ExperimentConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.config = config;
  std::vector<PlotSeries> plots;
  switch (config.suite) {
    case Suite::Convergence: run_convergence(config, rec, plots); break;
    case Suite::Nonuniqueness: run_nonuniqueness(config, rec, plots); break;
    case Suite::PinningEquivalence:
      run_pinning_equivalence(config, rec, plots);
      break;
    case Suite::Oscillation: run_oscillation(config, rec, plots); break;
    case Suite::EnergyStability: run_energy_stability(config, rec, plots); break;
    case Suite::DriftNorms: run_drift_norms(config, rec, plots); break;
    case Suite::EpsilonContinuation:
      run_epsilon_continuation(config, rec, plots);
      break;
  }

  const fs::path dir = run_dir(config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir: " + dir.string());

  rec.artifacts.push_back(emit_table(rec));
  const fs::path svg = dir / "plot.svg";
  write_text_file(svg.string(),
                  svg_loglog_plot(config.name, "x", "value", plots));
  rec.artifacts.push_back(svg.string());

  rec.wall_clock_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  const fs::path rj = dir / "record.json";
  write_text_file(rj.string(), record_to_json_text(rec));
  rec.artifacts.push_back(rj.string());
  return rec;
}

std::string emit_table(const RunRecord& record) {
  const ExperimentConfig& c = record.config;
  const fs::path dir = run_dir(c);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string path = (dir / "table.csv").string();
  std::ostringstream o;

  switch (c.suite) {
    case Suite::Convergence: {
      o << "n_r,n_theta,h_r,scheme,alpha,beta,error_sup,error_energy,"
           "order_running\n";
      for (std::size_t i = 0; i < record.reports.size(); ++i) {
        const auto& r = record.reports[i];
        const auto es = record.metrics.find("error_sup_" + std::to_string(i));
        const auto ee =
            record.metrics.find("error_energy_" + std::to_string(i));
        o << r.n_r << ',' << r.n_theta << ',' << fmt(1.0 / r.n_r) << ','
          << (c.scheme == Scheme::Centered ? "centered" : "upwind") << ','
          << fmt(c.alpha) << ',' << fmt(c.beta) << ','
          << (es != record.metrics.end() ? fmt(es->second) : "") << ','
          << (ee != record.metrics.end() ? fmt(ee->second) : "") << ','
          << (i >= 1 ? fmt(r.estimate.fitted_order) : "") << '\n';
      }
      break;
    }
    case Suite::Oscillation: {
      o << "k,R,osc,ratio_half_over_double\n";
      if (!record.reports.empty()) {
        const auto& tab = record.reports.front().estimate.osc_table;
        for (std::size_t k = 0; k < tab.size(); ++k) {
          const auto it = record.metrics.find("ratio_R_" + fmt(tab[k].first));
          o << k << ',' << fmt(tab[k].first) << ',' << fmt(tab[k].second)
            << ',' << (it != record.metrics.end() ? fmt(it->second) : "")
            << '\n';
        }
      }
      break;
    }
    default: {
      // generic long-form table: one row per (grid, metric)
      o << "n_r,n_theta,metric,value\n";
      const int nr = record.reports.empty() ? 0 : record.reports.front().n_r;
      const int nt =
          record.reports.empty() ? 0 : record.reports.front().n_theta;
      for (const auto& [k, v] : record.metrics)
        o << nr << ',' << nt << ',' << k << ',' << fmt(v) << '\n';
      break;
    }
  }
  write_text_file(path, o.str());
  return path;
}

std::string record_to_json_text(const RunRecord& record) {
  json reports = json::array();
  for (const auto& r : record.reports)
    reports.push_back(json{{"n_r", r.n_r},
                           {"n_theta", r.n_theta},
                           {"estimate", estimate_to_json(r.estimate)},
                           {"solve", solve_to_json(r.solve)}});
  const json j{{"config", config_to_json(record.config)},
               {"reports", reports},
               {"metrics", record.metrics},
               {"wall_clock_ms", record.wall_clock_ms},
               {"artifacts", record.artifacts}};
  return j.dump(2) + "\n";
}

RunRecord record_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  RunRecord rec;
  const json& jc = j.at("config");
  std::ostringstream cfg;
  cfg << jc;
  rec.config = config_from_json_text(cfg.str());
  for (const auto& r : j.at("reports")) {
    GridReport gr;
    gr.n_r = r.at("n_r");
    gr.n_theta = r.at("n_theta");
    gr.estimate = estimate_from_json(r.at("estimate"));
    gr.solve = solve_from_json(r.at("solve"));
    rec.reports.push_back(std::move(gr));
  }
  rec.metrics = j.at("metrics").get<std::map<std::string, double>>();
  rec.wall_clock_ms = j.at("wall_clock_ms");
  rec.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  return rec;
}

bool record_equal(const RunRecord& a, const RunRecord& b) {
  auto cfg_eq = [](const ExperimentConfig& x, const ExperimentConfig& y) {
    return x.name == y.name && x.suite == y.suite && x.alpha == y.alpha &&
           x.beta == y.beta && x.grids == y.grids && x.scheme == y.scheme &&
           x.tol == y.tol && x.q == y.q && x.seed == y.seed &&
           x.output_dir == y.output_dir;
  };
  auto est_eq = [](const EstimateReport& x, const EstimateReport& y) {
    return x.energy_norm == y.energy_norm && x.sup_norm == y.sup_norm &&
           x.grad_lp == y.grad_lp && x.osc_table == y.osc_table &&
           x.fitted_mu == y.fitted_mu && x.fitted_order == y.fitted_order;
  };
  auto slv_eq = [](const SolveReport& x, const SolveReport& y) {
    return x.iterations == y.iterations &&
           x.final_residual == y.final_residual &&
           x.epsilon_schedule == y.epsilon_schedule &&
           x.fixed_point_iters == y.fixed_point_iters &&
           x.converged == y.converged &&
           x.cauchy_increments == y.cauchy_increments;
  };
  if (!cfg_eq(a.config, b.config) || a.metrics != b.metrics ||
      a.wall_clock_ms != b.wall_clock_ms || a.artifacts != b.artifacts ||
      a.reports.size() != b.reports.size())
    return false;
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    const auto& x = a.reports[i];
    const auto& y = b.reports[i];
    if (x.n_r != y.n_r || x.n_theta != y.n_theta ||
        !est_eq(x.estimate, y.estimate) || !slv_eq(x.solve, y.solve))
      return false;
  }
  return true;
}

ScalarFn annulus_bump(double amplitude) {
  return [amplitude](double r, double) {
    const double s = (r - 0.5) / 0.1;
    if (std::abs(s) >= 1.0) return 0.0;
    return amplitude * std::exp(-1.0 / (1.0 - s * s));
  };
}

ScalarFn disk_bump(double cx, double cy, double rho, double amplitude) {
  return [=](double r, double theta) {
    const double x = r * std::cos(theta), y = r * std::sin(theta);
    const double d2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (rho * rho);
    if (d2 >= 1.0) return 0.0;
    return amplitude * std::exp(-1.0 / (1.0 - d2));
  };
}

std::vector<ScalarFn> seeded_bump_sources(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.3, 0.7);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
  std::uniform_real_distribution<double> amp(5.0, 15.0);
  std::vector<ScalarFn> out;
  for (int i = 0; i < count; ++i) {
    const double rc = rad(rng), th = ang(rng), a = amp(rng);
    out.push_back(
        disk_bump(rc * std::cos(th), rc * std::sin(th), 0.15, a));
  }
  return out;
}

}  // namespace sdlab
