#pragma once

#include <cstddef>
#include <string_view>

// Vector kernels used by the assembly/solver hot loops. Every operation has a
// scalar reference implementation and, where the hardware supports it, a SIMD
// variant (AVX2+FMA on x86-64, NEON on arm64). The backend is picked once at
// runtime from CPU capabilities; SDLAB_KERNELS=scalar|avx2|neon overrides the
// choice. SIMD variants must agree with the scalar reference up to summation
// reordering and fused-multiply-add rounding; tests/test_kernels.cpp enforces
// this.

namespace sdlab::kernels {

// y += a*x
void axpy(std::size_t n, double a, const double* x, double* y);
// x *= a
void scal(std::size_t n, double a, double* x);
double dot(std::size_t n, const double* x, const double* y);
double nrm2(std::size_t n, const double* x);
// y = A*x, A in CSR form with row_ptr of length n+1
void spmv(std::size_t n, const int* row_ptr, const int* col, const double* val,
          const double* x, double* y);

// Name of the backend serving the calls above: "scalar", "avx2" or "neon".
std::string_view active_backend();

// Force a backend by name. Returns false (and leaves the backend unchanged)
// if the name is unknown or unsupported on this CPU.
bool set_backend(std::string_view name);

// Reference implementations, always available regardless of dispatch.
namespace scalar {
void axpy(std::size_t n, double a, const double* x, double* y);
void scal(std::size_t n, double a, double* x);
double dot(std::size_t n, const double* x, const double* y);
double nrm2(std::size_t n, const double* x);
void spmv(std::size_t n, const int* row_ptr, const int* col, const double* val,
          const double* x, double* y);
}  // namespace scalar

}  // namespace sdlab::kernels
