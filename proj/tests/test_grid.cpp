#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdlab/grid.hpp"

using namespace sdlab;

namespace {
constexpr double kPi = std::numbers::pi;

DiscreteField eval_on(const Grid& g, double (*f)(double, double)) {
  DiscreteField u(g.node_count);
  for (int k = 0; k < g.node_count; ++k) u[k] = f(g.r[k], g.theta[k]);
  return u;
}
}  // namespace

TEST_CASE("node counting and ordering") {
  const Grid g = build_disk_grid(4, 8);
  CHECK(g.node_count == 33);  // 1 + 3*8 + 8
  CHECK(g.r[0] == 0.0);
  CHECK(g.index(1, 0) == 1);
  CHECK(g.index(2, 0) == 9);
  // node positions exact
  for (int i = 1; i <= 4; ++i)
    for (int j = 0; j < 8; ++j) {
      const int k = g.index(i, j);
      CHECK(g.r[k] == i * g.h_r);
      CHECK(g.theta[k] == j * g.h_theta);
    }
}

TEST_CASE("exactly one center node and n_theta boundary nodes") {
  const Grid g = build_disk_grid(8, 16);
  int centers = 0, boundary = 0;
  for (int k = 0; k < g.node_count; ++k) {
    if (g.r[k] == 0.0) ++centers;
    if (g.is_boundary[k]) {
      ++boundary;
      CHECK(g.r[k] == 1.0);
    }
  }
  CHECK(centers == 1);
  CHECK(boundary == 16);
}

TEST_CASE("weights approximate the disk area") {
  for (int nr : {4, 16, 64}) {
    const Grid g = build_disk_grid(nr, 2 * nr);
    double total = 0.0;
    for (double w : g.quad_w) total += w;
    CHECK(total >= kPi * (1.0 - 5.0 / nr));
    CHECK(total <= kPi * (1.0 + 5.0 / nr));
  }
  const Grid g = build_disk_grid(64, 128);
  double total = 0.0;
  for (double w : g.quad_w) total += w;
  CHECK(std::abs(total - kPi) <= 0.08 * kPi);
}

TEST_CASE("precondition rejection") {
  CHECK_THROWS_AS(build_disk_grid(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_disk_grid(4, 7), std::invalid_argument);
  CHECK_THROWS_AS(build_disk_grid(4, 6), std::invalid_argument);
}

TEST_CASE("radial grid endpoints") {
  const RadialGrid rg = build_radial_grid(10);
  CHECK(rg.r.front() == 0.0);
  CHECK(rg.r.back() == 1.0);
  for (int i = 1; i <= 10; ++i) CHECK(rg.r[i] > rg.r[i - 1]);
}

TEST_CASE("integrate: constants, zero, odd symmetry") {
  const Grid g = build_disk_grid(64, 128);
  CHECK(integrate(g, DiscreteField(g.node_count, 1.0)) ==
        doctest::Approx(kPi).epsilon(0.026));
  CHECK(integrate(g, DiscreteField(g.node_count, 0.0)) == 0.0);
  const DiscreteField odd =
      eval_on(g, [](double r, double th) { return r * std::cos(th); });
  CHECK(std::abs(integrate(g, odd)) <= 1e-10 * g.node_count);
}

TEST_CASE("integrate is linear to machine precision") {
  const Grid g = build_disk_grid(16, 32);
  const DiscreteField f =
      eval_on(g, [](double r, double th) { return r * r + std::sin(th); });
  const DiscreteField h =
      eval_on(g, [](double r, double th) { return std::cos(3 * th) - r; });
  DiscreteField combo(g.node_count);
  for (int k = 0; k < g.node_count; ++k) combo[k] = 2.5 * f[k] - 0.5 * h[k];
  CHECK(integrate(g, combo) ==
        doctest::Approx(2.5 * integrate(g, f) - 0.5 * integrate(g, h))
            .epsilon(1e-13));
}

TEST_CASE("quadrature is second order on smooth fields") {
  // exact values: area pi, integral of r^2 is pi/2, r^2 cos^2 theta is pi/4
  struct Case {
    double (*f)(double, double);
    double exact;
  };
  const Case cases[] = {
      {[](double, double) { return 1.0; }, kPi},
      {[](double r, double) { return r * r; }, kPi / 2.0},
      {[](double r, double th) {
         return r * r * std::cos(th) * std::cos(th);
       },
       kPi / 4.0},
  };
  for (const auto& c : cases) {
    const Grid g1 = build_disk_grid(16, 32);
    const Grid g2 = build_disk_grid(32, 64);
    const double e1 = std::abs(integrate(g1, eval_on(g1, c.f)) - c.exact);
    const double e2 = std::abs(integrate(g2, eval_on(g2, c.f)) - c.exact);
    CHECK(e1 / e2 >= 3.0);
  }
}

TEST_CASE("integrate rejects size mismatch") {
  const Grid g = build_disk_grid(4, 8);
  CHECK_THROWS_AS(integrate(g, DiscreteField(7)), std::invalid_argument);
}
