#include <immintrin.h>

#include <cstddef>

#include "kernels_table.hpp"

// AVX2+FMA variants of the inner-loop kernels. Four lanes of double per
// vector, unaligned loads, scalar tail. Ratio kernels implement the
// zero-numerator rule branch-free: lanes with num <= 0 get their denominator
// replaced by 1 before the division, so they contribute exactly 0.
namespace cascade::kern {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swap = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

void accumulate_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i),
                                            _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void max_update_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_max_pd(_mm256_loadu_pd(acc + i),
                                            _mm256_loadu_pd(x + i)));
  for (; i < n; ++i)
    if (x[i] > acc[i]) acc[i] = x[i];
}

std::size_t count_positive_avx2(const double* a, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_GT_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_pd(m))));
  }
  for (; i < n; ++i)
    if (a[i] > 0.0) ++c;
  return c;
}

double shared_load_avx2(const double* dem, const double* col,
                        const double* den, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d num =
        _mm256_mul_pd(_mm256_loadu_pd(dem + i), _mm256_loadu_pd(col + i));
    const __m256d mask = _mm256_cmp_pd(num, zero, _CMP_GT_OQ);
    const __m256d d = _mm256_blendv_pd(one, _mm256_loadu_pd(den + i), mask);
    acc = _mm256_add_pd(acc, _mm256_div_pd(num, d));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) r += num / den[i];
  }
  return r;
}

double shared_load_joining_avx2(const double* dem, const double* col,
                                const double* den, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(col + i);
    const __m256d num = _mm256_mul_pd(_mm256_loadu_pd(dem + i), c);
    const __m256d mask = _mm256_cmp_pd(num, zero, _CMP_GT_OQ);
    const __m256d joined = _mm256_add_pd(_mm256_loadu_pd(den + i), c);
    const __m256d d = _mm256_blendv_pd(one, joined, mask);
    acc = _mm256_add_pd(acc, _mm256_div_pd(num, d));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) r += num / (den[i] + col[i]);
  }
  return r;
}

double pairwise_load_avx2(const double* dem, const double* col,
                          const double* diag, const double* act,
                          std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(col + i);
    const __m256d num = _mm256_mul_pd(_mm256_loadu_pd(dem + i), c);
    const __m256d mask = _mm256_cmp_pd(num, zero, _CMP_GT_OQ);
    const __m256d joined =
        _mm256_fmadd_pd(_mm256_loadu_pd(act + i), _mm256_loadu_pd(diag + i), c);
    const __m256d d = _mm256_blendv_pd(one, joined, mask);
    acc = _mm256_add_pd(acc, _mm256_div_pd(num, d));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) r += num / (col[i] + act[i] * diag[i]);
  }
  return r;
}

constexpr KernelTable kAvx2Table = {
    sum_avx2,
    dot_avx2,
    accumulate_avx2,
    max_update_avx2,
    count_positive_avx2,
    shared_load_avx2,
    shared_load_joining_avx2,
    pairwise_load_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2Table; }

bool avx2_cpu_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace cascade::kern
