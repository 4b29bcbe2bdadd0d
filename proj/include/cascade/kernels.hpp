#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Inner-loop kernels for the simulation engine. Each operation has a scalar
// reference implementation and, where the build target supports it, a SIMD
// variant (AVX2+FMA on x86-64, NEON on aarch64) selected at runtime. The
// scalar versions define the semantics; vector versions must agree up to
// floating-point reassociation and are equivalence-tested against them.
//
// Conventions shared by all ratio kernels: entries are non-negative, and a
// term with zero numerator contributes 0 regardless of its denominator
// (the 0/0 := 0 rule). Callers guarantee that any term with a positive
// numerator has a positive denominator.
namespace cascade::kern {

enum class Isa { scalar, avx2, neon };

std::string to_string(Isa isa);

// True if the running CPU (and this build) can execute the given variant.
bool supported(Isa isa);

// Currently selected variant. Defaults to the best supported one; the
// environment variable CASCADE_ISA=scalar|avx2|neon overrides at startup.
Isa active();

// Select a variant explicitly; throws std::invalid_argument if unsupported.
void select(Isa isa);

// Sum of a[i] for i < n.
double sum(const double* a, std::size_t n);

// Dot product: sum of a[i] * b[i].
double dot(const double* a, const double* b, std::size_t n);

// acc[i] += x[i].
void accumulate(double* acc, const double* x, std::size_t n);

// acc[i] = max(acc[i], x[i]).
void max_update(double* acc, const double* x, std::size_t n);

// Number of entries strictly greater than zero.
std::size_t count_positive(const double* a, std::size_t n);

// Sum over i of dem[i]*col[i] / den[i], zero-numerator terms contributing 0.
double shared_load(const double* dem, const double* col, const double* den,
                   std::size_t n);

// Same but with denominators den[i] + col[i]: the load a candidate sees
// when its own column joins the shared denominators.
double shared_load_joining(const double* dem, const double* col,
                           const double* den, std::size_t n);

// Sum over i of dem[i]*col[i] / (col[i] + act[i]*diag[i]); act[i] is 0 or 1.
double pairwise_load(const double* dem, const double* col, const double* diag,
                     const double* act, std::size_t n);

}  // namespace cascade::kern
