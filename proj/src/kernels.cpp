#include "cascade/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "kernels_table.hpp"

namespace cascade::kern {

namespace {

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void accumulate_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void max_update_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > acc[i]) acc[i] = x[i];
}

std::size_t count_positive_scalar(const double* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] > 0.0) ++c;
  return c;
}

double shared_load_scalar(const double* dem, const double* col,
                          const double* den, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) acc += num / den[i];
  }
  return acc;
}

double shared_load_joining_scalar(const double* dem, const double* col,
                                  const double* den, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) acc += num / (den[i] + col[i]);
  }
  return acc;
}

double pairwise_load_scalar(const double* dem, const double* col,
                            const double* diag, const double* act,
                            std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double num = dem[i] * col[i];
    if (num > 0.0) acc += num / (col[i] + act[i] * diag[i]);
  }
  return acc;
}

constexpr KernelTable kScalarTable = {
    sum_scalar,
    dot_scalar,
    accumulate_scalar,
    max_update_scalar,
    count_positive_scalar,
    shared_load_scalar,
    shared_load_joining_scalar,
    pairwise_load_scalar,
};

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalarTable;
    case Isa::avx2:
#ifdef CASCADE_HAVE_AVX2_TU
      if (avx2_cpu_supported()) return avx2_table();
#endif
      return nullptr;
    case Isa::neon:
#ifdef CASCADE_HAVE_NEON_TU
      return neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

Isa best_supported() {
  if (table_for(Isa::avx2) != nullptr) return Isa::avx2;
  if (table_for(Isa::neon) != nullptr) return Isa::neon;
  return Isa::scalar;
}

Isa initial_isa() {
  if (const char* env = std::getenv("CASCADE_ISA")) {
    const std::string s(env);
    Isa want;
    if (s == "scalar") want = Isa::scalar;
    else if (s == "avx2") want = Isa::avx2;
    else if (s == "neon") want = Isa::neon;
    else return best_supported();
    if (table_for(want) != nullptr) return want;
  }
  return best_supported();
}

const KernelTable& table() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    const Isa isa = initial_isa();
    t = table_for(isa);
    g_isa.store(isa, std::memory_order_relaxed);
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool supported(Isa isa) { return table_for(isa) != nullptr; }

Isa active() {
  table();  // force initialization
  return g_isa.load(std::memory_order_relaxed);
}

void select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr)
    throw std::invalid_argument("kernel variant not supported on this CPU: " +
                                to_string(isa));
  g_isa.store(isa, std::memory_order_relaxed);
  g_table.store(t, std::memory_order_release);
}

double sum(const double* a, std::size_t n) { return table().sum(a, n); }

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

void accumulate(double* acc, const double* x, std::size_t n) {
  table().accumulate(acc, x, n);
}

void max_update(double* acc, const double* x, std::size_t n) {
  table().max_update(acc, x, n);
}

std::size_t count_positive(const double* a, std::size_t n) {
  return table().count_positive(a, n);
}

double shared_load(const double* dem, const double* col, const double* den,
                   std::size_t n) {
  return table().shared_load(dem, col, den, n);
}

double shared_load_joining(const double* dem, const double* col,
                           const double* den, std::size_t n) {
  return table().shared_load_joining(dem, col, den, n);
}

double pairwise_load(const double* dem, const double* col, const double* diag,
                     const double* act, std::size_t n) {
  return table().pairwise_load(dem, col, diag, act, n);
}

}  // namespace cascade::kern
