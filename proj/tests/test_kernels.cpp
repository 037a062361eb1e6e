#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sdlab/kernels.hpp"

using namespace sdlab;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

// random CSR with ~5 entries per row, like the disk stencils
struct RandomCsr {
  std::vector<int> row_ptr, col;
  std::vector<double> val;
};

RandomCsr random_csr(int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> cols(0, n - 1);
  std::uniform_real_distribution<double> vals(-2.0, 2.0);
  RandomCsr m;
  m.row_ptr.push_back(0);
  for (int i = 0; i < n; ++i) {
    const int nnz = 1 + static_cast<int>(rng() % 7);
    for (int k = 0; k < nnz; ++k) {
      m.col.push_back(cols(rng));
      m.val.push_back(vals(rng));
    }
    m.row_ptr.push_back(static_cast<int>(m.col.size()));
  }
  return m;
}

const std::size_t kSizes[] = {0, 1, 3, 4, 7, 8, 64, 1000, 4097};

}  // namespace

TEST_CASE("scalar reference kernels match hand results") {
  std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> y{4.0, 5.0, 6.0};
  CHECK(kernels::scalar::dot(3, x.data(), y.data()) == doctest::Approx(32.0));
  kernels::scalar::axpy(3, 2.0, x.data(), y.data());
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[2] == doctest::Approx(12.0));
  kernels::scalar::scal(3, 0.5, y.data());
  CHECK(y[1] == doctest::Approx(4.5));
  CHECK(kernels::scalar::nrm2(3, x.data()) ==
        doctest::Approx(std::sqrt(14.0)));
}

TEST_CASE("dispatched kernels agree with the scalar reference") {
  std::mt19937 rng(42);
  INFO("active backend: ", std::string(kernels::active_backend()));
  for (std::size_t n : kSizes) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);

    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) bound += std::abs(x[i] * y[i]);
    const double tol = 1e-13 * bound + 1e-300;
    CHECK(std::abs(kernels::dot(n, x.data(), y.data()) -
                   kernels::scalar::dot(n, x.data(), y.data())) <= tol);
    CHECK(std::abs(kernels::nrm2(n, x.data()) -
                   kernels::scalar::nrm2(n, x.data())) <=
          1e-13 * kernels::scalar::nrm2(n, x.data()) + 1e-300);

    auto y1 = y, y2 = y;
    kernels::axpy(n, 1.7, x.data(), y1.data());
    kernels::scalar::axpy(n, 1.7, x.data(), y2.data());
    for (std::size_t i = 0; i < n; ++i) {
      // FMA variants round once per element: allow a couple of ulps
      const double etol = 4e-16 * (std::abs(1.7 * x[i]) + std::abs(y[i]));
      CHECK(std::abs(y1[i] - y2[i]) <= etol);
    }

    auto x1 = x, x2 = x;
    kernels::scal(n, -0.3, x1.data());
    kernels::scalar::scal(n, -0.3, x2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == x2[i]);  // mul only: exact
  }
}

TEST_CASE("spmv variants agree on random CSR matrices") {
  std::mt19937 rng(7);
  for (int n : {1, 5, 33, 257, 1024}) {
    const RandomCsr m = random_csr(n, rng);
    const auto x = random_vec(n, rng);
    std::vector<double> y1(n), y2(n);
    kernels::spmv(n, m.row_ptr.data(), m.col.data(), m.val.data(), x.data(),
                  y1.data());
    kernels::scalar::spmv(n, m.row_ptr.data(), m.col.data(), m.val.data(),
                          x.data(), y2.data());
    for (int i = 0; i < n; ++i)
      CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
  }
}

TEST_CASE("every supported backend is equivalence-tested explicitly") {
  const std::string initial(kernels::active_backend());
  std::mt19937 rng(99);
  const auto x = random_vec(513, rng);
  const auto y = random_vec(513, rng);
  const double ref = kernels::scalar::dot(513, x.data(), y.data());

  for (const char* name : {"scalar", "avx2", "neon"}) {
    if (!kernels::set_backend(name)) continue;
    CHECK(std::string(kernels::active_backend()) == name);
    CHECK(kernels::dot(513, x.data(), y.data()) ==
          doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(kernels::set_backend(initial));
  CHECK_FALSE(kernels::set_backend("avx9000"));
}
