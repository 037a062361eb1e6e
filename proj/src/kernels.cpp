#include "sdlab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>

#if defined(__aarch64__) || defined(__ARM_NEON)
#include <arm_neon.h>
#define SDLAB_HAVE_NEON 1
#else
#define SDLAB_HAVE_NEON 0
#endif

namespace sdlab::kernels {

namespace scalar {

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dot(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2(std::size_t n, const double* x) { return std::sqrt(dot(n, x, x)); }

void spmv(std::size_t n, const int* row_ptr, const int* col, const double* val,
          const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

}  // namespace scalar

#if SDLAB_HAVE_NEON
namespace neon {

void axpy(std::size_t n, double a, const double* x, double* y) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(std::size_t n, double a, double* x) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
  for (; i < n; ++i) x[i] *= a;
}

double dot(std::size_t n, const double* x, const double* y) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2(std::size_t n, const double* x) { return std::sqrt(dot(n, x, x)); }

void spmv(std::size_t n, const int* row_ptr, const int* col, const double* val,
          const double* x, double* y) {
  scalar::spmv(n, row_ptr, col, val, x, y);  // gathers dominate; scalar wins
}

}  // namespace neon
#endif

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(std::size_t n, double a, const double* x, double* y);
void scal(std::size_t n, double a, double* x);
double dot(std::size_t n, const double* x, const double* y);
double nrm2(std::size_t n, const double* x);
void spmv(std::size_t n, const int* row_ptr, const int* col, const double* val,
          const double* x, double* y);
bool supported();
}  // namespace avx2
#endif

namespace {

struct Table {
  std::string_view name;
  void (*axpy)(std::size_t, double, const double*, double*);
  void (*scal)(std::size_t, double, double*);
  double (*dot)(std::size_t, const double*, const double*);
  double (*nrm2)(std::size_t, const double*);
  void (*spmv)(std::size_t, const int*, const int*, const double*,
               const double*, double*);
};

constexpr Table kScalar{"scalar", scalar::axpy, scalar::scal, scalar::dot,
                        scalar::nrm2, scalar::spmv};

const Table* table_for(std::string_view name) {
  if (name == "scalar") return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
  static const Table kAvx2{"avx2", avx2::axpy, avx2::scal, avx2::dot,
                           avx2::nrm2, avx2::spmv};
  if (name == "avx2" && avx2::supported()) return &kAvx2;
#endif
#if SDLAB_HAVE_NEON
  static const Table kNeon{"neon", neon::axpy, neon::scal, neon::dot,
                           neon::nrm2, neon::spmv};
  if (name == "neon") return &kNeon;
#endif
  return nullptr;
}

const Table* pick_default() {
  if (const char* env = std::getenv("SDLAB_KERNELS")) {
    if (const Table* t = table_for(env)) return t;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (const Table* t = table_for("avx2")) return t;
#endif
#if SDLAB_HAVE_NEON
  if (const Table* t = table_for("neon")) return t;
#endif
  return &kScalar;
}

const Table* g_table = nullptr;
std::once_flag g_once;

const Table& active() {
  std::call_once(g_once, [] { g_table = pick_default(); });
  return *g_table;
}

}  // namespace

void axpy(std::size_t n, double a, const double* x, double* y) {
  active().axpy(n, a, x, y);
}
void scal(std::size_t n, double a, double* x) { active().scal(n, a, x); }
double dot(std::size_t n, const double* x, const double* y) {
  return active().dot(n, x, y);
}
double nrm2(std::size_t n, const double* x) { return active().nrm2(n, x); }
void spmv(std::size_t n, const int* row_ptr, const int* col, const double* val,
          const double* x, double* y) {
  active().spmv(n, row_ptr, col, val, x, y);
}

std::string_view active_backend() { return active().name; }

bool set_backend(std::string_view name) {
  active();  // ensure initialized
  if (const Table* t = table_for(name)) {
    g_table = t;
    return true;
  }
  return false;
}

}  // namespace sdlab::kernels
