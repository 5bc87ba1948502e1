#pragma once

#include <cstddef>

// Dense double-array kernels used by the PageRank iteration and the
// estimate finalization step. Each kernel has a scalar reference
// implementation and a SIMD variant (AVX2 on x86-64, NEON on aarch64)
// selected once at startup from CPU feature detection. Elementwise kernels
// (affine/scale/mul) are bit-identical across variants; reductions may
// differ in the last ulp because lane sums reassociate.
namespace infcen::kernels {

enum class Isa { scalar, avx2, neon };

struct Ops {
  // y[i] = a * x[i] + b
  void (*affine)(double* y, const double* x, double a, double b, std::size_t n);
  // y[i] *= a
  void (*scale)(double* y, double a, std::size_t n);
  // y[i] = a[i] * b[i]
  void (*mul)(double* y, const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // sum_i |a[i] - b[i]|
  double (*l1_diff)(const double* a, const double* b, std::size_t n);
  Isa isa;
};

const Ops& scalar_ops();

// Best variant for this machine (cached after first call).
const Ops& active();

bool cpu_has_avx2();

// Test hook: pin the active variant. Throws std::invalid_argument if the
// requested ISA is not available on this machine.
void force_isa(Isa isa);
void reset_isa();

}  // namespace infcen::kernels
