#include <arm_neon.h>

#include <cstddef>

#include "kernels_table.hpp"

// NEON variants for aarch64: two lanes of double per vector, scalar tail.
// Semantics mirror the scalar reference; see kernels.cpp.
namespace cascade::kern {

namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

void accumulate_neon(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void max_update_neon(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(acc + i, vmaxq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
  for (; i < n; ++i)
    if (x[i] > acc[i]) acc[i] = x[i];
}

std::size_t count_positive_neon(const double* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] > 0.0) ++c;
  return c;
}

inline float64x2_t masked_ratio(float64x2_t num, float64x2_t den) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const uint64x2_t mask = vcgtq_f64(num, zero);
  const float64x2_t safe = vbslq_f64(mask, den, one);
  return vbslq_f64(mask, vdivq_f64(num, safe), zero);
}

double shared_load_neon(const double* dem, const double* col,
                        const double* den, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t num = vmulq_f64(vld1q_f64(dem + i), vld1q_f64(col + i));
    acc = vaddq_f64(acc, masked_ratio(num, vld1q_f64(den + i)));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) r += num / den[i];
  }
  return r;
}

double shared_load_joining_neon(const double* dem, const double* col,
                                const double* den, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t c = vld1q_f64(col + i);
    const float64x2_t num = vmulq_f64(vld1q_f64(dem + i), c);
    acc = vaddq_f64(acc, masked_ratio(num, vaddq_f64(vld1q_f64(den + i), c)));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) r += num / (den[i] + col[i]);
  }
  return r;
}

double pairwise_load_neon(const double* dem, const double* col,
                          const double* diag, const double* act,
                          std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t c = vld1q_f64(col + i);
    const float64x2_t num = vmulq_f64(vld1q_f64(dem + i), c);
    const float64x2_t den =
        vfmaq_f64(c, vld1q_f64(act + i), vld1q_f64(diag + i));
    acc = vaddq_f64(acc, masked_ratio(num, den));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) r += num / (col[i] + act[i] * diag[i]);
  }
  return r;
}

constexpr KernelTable kNeonTable = {
    sum_neon,
    dot_neon,
    accumulate_neon,
    max_update_neon,
    count_positive_neon,
    shared_load_neon,
    shared_load_joining_neon,
    pairwise_load_neon,
};

}  // namespace

const KernelTable* neon_table() { return &kNeonTable; }

}  // namespace cascade::kern
