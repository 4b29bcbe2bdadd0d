#pragma once

#include <cstddef>

// Internal dispatch table shared between the kernel translation units.
namespace cascade::kern {

struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*accumulate)(double*, const double*, std::size_t);
  void (*max_update)(double*, const double*, std::size_t);
  std::size_t (*count_positive)(const double*, std::size_t);
  double (*shared_load)(const double*, const double*, const double*,
                        std::size_t);
  double (*shared_load_joining)(const double*, const double*, const double*,
                                std::size_t);
  double (*pairwise_load)(const double*, const double*, const double*,
                          const double*, std::size_t);
};

#ifdef CASCADE_HAVE_AVX2_TU
const KernelTable* avx2_table();
bool avx2_cpu_supported();
#endif
#ifdef CASCADE_HAVE_NEON_TU
const KernelTable* neon_table();
#endif

}  // namespace cascade::kern
