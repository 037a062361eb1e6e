#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdlab/drift.hpp"

using namespace sdlab;

namespace {
constexpr double kSqrtPi = 1.7724538509055160;  // sqrt(pi)

double l2_norm(const VectorFieldSample& f, const Grid& g) {
  double s = 0.0;
  for (int k = 0; k < g.node_count; ++k)
    s += g.quad_w[k] * (f.vr[k] * f.vr[k] + f.vt[k] * f.vt[k]);
  return std::sqrt(s);
}

double max_interior_div(const VectorFieldSample& f, const Grid& g) {
  const DiscreteField d = discrete_divergence(f, g);
  double m = 0.0;
  for (int k = 0; k < g.node_count; ++k) m = std::max(m, std::abs(d[k]));
  return m;
}
}  // namespace

TEST_CASE("eval_drift pointwise values") {
  const Grid g = build_disk_grid(16, 32);

  SUBCASE("regularized singular part vanishes at the origin") {
    const auto f = eval_drift(DriftSpec{1.0, 0.1, NoDivfree{}}, g);
    CHECK(f.vr[0] == 0.0);
    CHECK(f.vt[0] == 0.0);
  }
  SUBCASE("swirl is purely angular with magnitude beta / r") {
    const auto f = eval_drift(DriftSpec{0.0, 0.0, Swirl{1.0}}, g);
    const int k = g.index(8, 0);  // r = 0.5, theta = 0
    CHECK(f.vr[k] == 0.0);
    CHECK(f.vt[k] == doctest::Approx(2.0));
  }
  SUBCASE("radial component at the boundary") {
    const auto f = eval_drift(DriftSpec{2.0, 0.01, NoDivfree{}}, g);
    const int k = g.index(16, 0);  // r = 1
    CHECK(f.vr[k] == doctest::Approx(-2.0 / 1.0001));
  }
  SUBCASE("epsilon = 0 with alpha != 0 rejected outside radial-exact mode") {
    CHECK_THROWS_AS(eval_drift(DriftSpec{1.0, 0.0, NoDivfree{}}, g),
                    std::invalid_argument);
    CHECK_NOTHROW(eval_drift(DriftSpec{1.0, 0.0, NoDivfree{}}, g, true));
  }
}

TEST_CASE("epsilon refinement agreement away from the origin") {
  // |b_eps - b_eps'| <= alpha * eps at nodes with r >= 2 sqrt(eps)
  const Grid g = build_disk_grid(64, 128);
  const double alpha = 1.5, eps = 0.05;
  const auto f1 = eval_drift(DriftSpec{alpha, eps, NoDivfree{}}, g);
  for (double eps2 : {0.025, 0.001}) {
    const auto f2 = eval_drift(DriftSpec{alpha, eps2, NoDivfree{}}, g);
    for (int k = 1; k < g.node_count; ++k) {
      if (g.r[k] < 2.0 * std::sqrt(eps)) continue;
      CHECK(std::abs(f1.vr[k] - f2.vr[k]) <= alpha * eps);
    }
  }
}

TEST_CASE("weak-L2 norm against the analytic level-set values") {
  // |{ |b| > lam }| = pi / lam^2 for |b| = 1/r, so the sup is sqrt(pi)
  const Grid g = build_disk_grid(256, 256);

  SUBCASE("x/|x|^2 sampled with tiny epsilon") {
    const auto f = eval_drift(DriftSpec{-1.0, 1e-6, NoDivfree{}}, g);
    CHECK(weak_l2_norm(f, g) == doctest::Approx(kSqrtPi).epsilon(0.10));
  }
  SUBCASE("zero field") {
    CHECK(weak_l2_norm(VectorFieldSample(g.node_count), g) == 0.0);
  }
  SUBCASE("swirl(2) scales the level sets by beta") {
    const auto f = eval_drift(DriftSpec{0.0, 0.0, Swirl{2.0}}, g);
    CHECK(weak_l2_norm(f, g) == doctest::Approx(2.0 * kSqrtPi).epsilon(0.10));
  }
}

TEST_CASE("weak-L2 positive homogeneity within sweep resolution") {
  const Grid g = build_disk_grid(64, 128);
  auto f = eval_drift(DriftSpec{0.0, 0.0, Stream{StreamProfileId::PolyCos, 1.0}},
                      g);
  const double base = weak_l2_norm(f, g);
  VectorFieldSample scaled = f;
  for (int k = 0; k < g.node_count; ++k) {
    scaled.vr[k] *= -7.5;
    scaled.vt[k] *= -7.5;
  }
  CHECK(weak_l2_norm(scaled, g) == doctest::Approx(7.5 * base).epsilon(0.02));
}

TEST_CASE("weak-L2 is dominated by L2 under the same quadrature") {
  const Grid g = build_disk_grid(64, 128);
  const DriftSpec specs[] = {
      {0.0, 0.0, Swirl{1.0}},
      {0.0, 0.0, Stream{StreamProfileId::PolyCos, 3.0}},
      {2.0, 0.05, Swirl{0.3}},
  };
  for (const auto& s : specs) {
    const auto f = eval_drift(s, g);
    CHECK(weak_l2_norm(f, g) <= l2_norm(f, g) * (1.0 + 1e-12));
  }
}

TEST_CASE("discrete divergence") {
  SUBCASE("swirl has no theta dependence: exact cancellation") {
    const Grid g = build_disk_grid(32, 64);
    const auto f = eval_drift(DriftSpec{0.0, 0.0, Swirl{1.0}}, g);
    CHECK(max_interior_div(f, g) <= 1e-8);
  }
  SUBCASE("linear radial field has divergence 2") {
    const Grid g = build_disk_grid(32, 64);
    VectorFieldSample f(g.node_count);
    for (int k = 1; k < g.node_count; ++k) f.vr[k] = g.r[k];
    const DiscreteField d = discrete_divergence(f, g);
    for (int i = 1; i < g.n_r; ++i)
      CHECK(d[g.index(i, 3)] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("analytic stream sample: divergence -> 0 at >= 1st order") {
    // the ring-1 radial stencil spans [0, 2h] and divides by r = h, which
    // caps the max-norm decay at first order; verify the slope approaches it
    const DriftSpec s{0.0, 0.0, Stream{StreamProfileId::PolyCos, 1.0}};
    std::vector<double> divs;
    for (int nr : {32, 64, 128}) {
      const Grid g = build_disk_grid(nr, 2 * nr);
      divs.push_back(max_interior_div(eval_drift(s, g), g));
    }
    CHECK(divs[0] > 1e-8);  // genuinely nonzero before refinement
    CHECK(divs[0] / divs[1] >= 1.7);
    CHECK(divs[1] / divs[2] >= 1.8);
  }
}

TEST_CASE("mollification of divergence-free parts") {
  const Grid g = build_disk_grid(64, 128);
  const DriftSpec swirl{0.0, 0.0, Swirl{1.0}};

  SUBCASE("near-identity away from the origin") {
    // ln r is harmonic away from 0, so the bump convolution reproduces it
    // exactly for r > eta; only quadrature error remains.
    for (double eta : {0.1, 0.05}) {
      const auto m = mollify_divfree(swirl, eta, g);
      const int k = g.index(32, 5);  // r = 0.5
      CHECK(m.vt[k] == doctest::Approx(2.0).epsilon(0.05));
      CHECK(std::abs(m.vr[k]) <= 0.05);
    }
  }
  SUBCASE("zero field mollifies to zero") {
    const auto m = mollify_divfree(DriftSpec{}, 0.1, g);
    for (int k = 0; k < g.node_count; ++k) {
      CHECK(m.vr[k] == 0.0);
      CHECK(m.vt[k] == 0.0);
    }
  }
  SUBCASE("construction is divergence-free to machine precision") {
    for (double eta : {0.2, 0.05}) {
      CHECK(max_interior_div(mollify_divfree(swirl, eta, g), g) <= 1e-8);
      const DriftSpec st{0.0, 0.0, Stream{StreamProfileId::PolyCos, 1.0}};
      CHECK(max_interior_div(mollify_divfree(st, eta, g), g) <= 1e-8);
    }
  }
  SUBCASE("weak norm stays within 3x of the unmollified field") {
    const Grid gf = build_disk_grid(128, 256);
    const double base = weak_l2_norm(eval_drift(swirl, gf), gf);
    for (double eta : {0.2, 0.1, 0.05}) {
      const double wm = weak_l2_norm(mollify_divfree(swirl, eta, gf), gf);
      CHECK(wm <= 3.0 * base);
    }
  }
  SUBCASE("finite at every node, including the ln-singular base at center") {
    const auto m = mollify_divfree(swirl, 0.1, g);
    for (int k = 0; k < g.node_count; ++k) {
      CHECK(std::isfinite(m.vr[k]));
      CHECK(std::isfinite(m.vt[k]));
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(mollify_divfree(swirl, 0.0, g), std::invalid_argument);
    CHECK_THROWS_AS(mollify_divfree(DriftSpec{1.0, 0.1, Swirl{1.0}}, 0.1, g),
                    std::invalid_argument);
  }
}

TEST_CASE("mollified variant inside eval_drift") {
  const Grid g = build_disk_grid(32, 64);
  DriftSpec spec;
  spec.alpha = 1.0;
  spec.epsilon = 0.05;
  spec.divfree = Mollified{Swirl{0.5}, 0.1};
  const auto f = eval_drift(spec, g);
  const int k = g.index(16, 0);  // r = 0.5
  CHECK(f.vt[k] == doctest::Approx(1.0).epsilon(0.06));  // 0.5 / 0.5
  CHECK(f.vr[k] ==
        doctest::Approx(-0.5 / (0.25 + 0.0025)).epsilon(0.05));  // singular part
}
