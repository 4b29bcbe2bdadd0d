#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cascade/rng.hpp"

namespace cascade {

// Nonempty subsets of {0..k-1} in canonical order: subsets of the first k-1
// elements, then {k-1}, then each earlier subset plus element k-1. That order
// coincides with ascending bitmask, so the index is arithmetic.
std::size_t canonical_index(std::size_t k, std::uint64_t subset);
std::uint64_t canonical_subset(std::size_t k, std::size_t position);
inline std::size_t subset_count(std::size_t k) { return (std::size_t{1} << k) - 1; }

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<long long> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  long long& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  long long at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  bool operator==(const IntMatrix&) const = default;
};

// A[s][t] = 1 iff the nonempty subsets at canonical positions s and t intersect.
IntMatrix incidence_matrix(std::size_t k);
// Exact integer inverse of incidence_matrix(k), from the closed form:
// zero unless the two subsets cover the universe, else sign by intersection parity.
IntMatrix inverse_incidence(std::size_t k);
IntMatrix multiply(const IntMatrix& lhs, const IntMatrix& rhs);

// Real-valued set function on all 2^k subsets of {0..k-1}, indexed by bitmask.
struct SubsetFunction {
  std::size_t n = 0;
  std::vector<double> values;

  SubsetFunction() = default;
  SubsetFunction(std::size_t n_, std::vector<double> v);
  static SubsetFunction tabulate(std::size_t n, const std::function<double(std::uint64_t)>& fn);
  double operator()(std::uint64_t mask) const { return values[mask]; }
};

// sum over S subseteq T of (-1)^(|T|-|S|) f(W | S). Agrees with the recursive
// one-element-at-a-time definition.
double discrete_derivative(const SubsetFunction& f, std::uint64_t T, std::uint64_t W);

struct CoverageCheck {
  bool pass = true;
  // f(empty) != 0 is reported separately from the sign conditions: it means the
  // process can fire with no sources at all.
  bool spontaneous = false;
  double empty_value = 0.0;
  std::vector<std::pair<std::uint64_t, double>> violations;  // (block mask, offending weight)
  double worst = 0.0;  // most negative margin over all conditions, 0 when clean
};

// Decision procedure: f describes a coverage process iff f(empty) = 0 and the
// alternating sums at complements have the proper sign for every block.
CoverageCheck check_coverage_conditions(const SubsetFunction& f, double tol = 1e-9);

struct EdgeDistribution {
  std::size_t k = 0;
  std::vector<double> q;    // cleaned weights by source-set bitmask, sums to 1
  std::vector<double> raw;  // weights before clamping, for diagnostics
  double min_raw = 0.0;     // most negative raw weight
};

// Distribution over in-edge source sets whose reachability probabilities
// reproduce f. Magnitudes below tol are clamped to zero; a weight below -tol
// means f is not a coverage function and throws.
EdgeDistribution edge_distribution(const SubsetFunction& f, double tol = 1e-9);

// Translate a bitmask over a sorted list of node ids to a global node bitmask.
std::uint64_t expand_mask(std::uint64_t local, std::span<const std::size_t> universe);
// Local bit i of node u's source sets names the i-th other node in id order.
std::uint64_t lift_source_mask(std::size_t u, std::uint64_t local, std::size_t n);

// One random graph: node u draws a source set from dists[u] (a distribution
// over subsets of the other n-1 nodes); result is per-node in-edge masks in
// global node ids.
std::vector<std::uint64_t> sample_graph(std::span<const EdgeDistribution> dists, Rng& rng);

// Closure of the seed set under the sampled in-edges: a node joins once any of
// its sources has joined.
std::uint64_t reachable(std::span<const std::uint64_t> in_masks, std::uint64_t seed_mask);

// Exact distribution of the final active set by enumerating all source-set
// configurations with positive probability. Throws when the configuration
// count exceeds max_configs.
std::map<std::uint64_t, double> exact_final_distribution(std::span<const EdgeDistribution> dists,
                                                         std::uint64_t seed_mask,
                                                         std::uint64_t max_configs = 10000000);

}  // namespace cascade
