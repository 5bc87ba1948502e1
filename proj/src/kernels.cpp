#include "infcen/kernels.hpp"

#include <atomic>
#include <stdexcept>

#if defined(__aarch64__) || defined(__ARM_NEON)
#define INFCEN_HAVE_NEON 1
#include <arm_neon.h>
#endif

namespace infcen::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();  // kernels_avx2.cpp, compiled with -mavx2
#endif

namespace {

void affine_scalar(double* y, const double* x, double a, double b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
}

void scale_scalar(double* y, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void mul_scalar(double* y, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double l1_diff_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    s += d < 0 ? -d : d;
  }
  return s;
}

constexpr Ops kScalar{affine_scalar, scale_scalar, mul_scalar,
                      sum_scalar, l1_diff_scalar, Isa::scalar};

#if INFCEN_HAVE_NEON

void affine_neon(double* y, const double* x, double a, double b, std::size_t n) {
  float64x2_t va = vdupq_n_f64(a), vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)), vb));
  for (; i < n; ++i) y[i] = a * x[i] + b;
}

void scale_neon(double* y, double a, std::size_t n) {
  float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), va));
  for (; i < n; ++i) y[i] *= a;
}

void mul_neon(double* y, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += x[i];
  return s;
}

double l1_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    s += d < 0 ? -d : d;
  }
  return s;
}

constexpr Ops kNeon{affine_neon, scale_neon, mul_neon,
                    sum_neon, l1_diff_neon, Isa::neon};

#endif  // INFCEN_HAVE_NEON

std::atomic<const Ops*> g_forced{nullptr};

const Ops* detect() {
#if INFCEN_HAVE_NEON
  return &kNeon;
#else
  if (cpu_has_avx2()) return &avx2_ops();
  return &kScalar;
#endif
}

}  // namespace

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }
#else
bool cpu_has_avx2() { return false; }
#endif

const Ops& scalar_ops() { return kScalar; }

const Ops& active() {
  const Ops* forced = g_forced.load(std::memory_order_acquire);
  if (forced) return *forced;
  static const Ops* best = detect();
  return *best;
}

void force_isa(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      g_forced.store(&kScalar, std::memory_order_release);
      return;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (cpu_has_avx2()) {
        g_forced.store(&avx2_ops(), std::memory_order_release);
        return;
      }
#endif
      throw std::invalid_argument("AVX2 not available on this CPU");
    case Isa::neon:
#if INFCEN_HAVE_NEON
      g_forced.store(&kNeon, std::memory_order_release);
      return;
#else
      throw std::invalid_argument("NEON not available on this CPU");
#endif
  }
  throw std::invalid_argument("unknown ISA");
}

void reset_isa() { g_forced.store(nullptr, std::memory_order_release); }

}  // namespace infcen::kernels
