#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cascade/coverage.hpp"
#include "cascade/process.hpp"
#include "cascade/rng.hpp"
#include "cascade/topology.hpp"
#include "cascade/welfare.hpp"

namespace cascade {

// Node u's activation threshold function over the other nodes: the fraction of
// its worst-case load C_u that an active set spares it. A node offered C_u
// activates iff a uniform private threshold falls below f(active set).
struct SeedActivation {
  std::size_t node = 0;
  double c_total = 0.0;                // C_u
  std::vector<std::size_t> universe;   // the other node ids, ascending
  SubsetFunction f;                    // bit i names universe[i]
};

SeedActivation activation_function(const Topology& t, std::size_t u);

// Source-set distributions for every node, from its activation function.
std::vector<EdgeDistribution> edge_distributions(const Topology& t, double tol = 1e-9);

// One run of the seeded threshold process: payments fixed at C_u, private
// thresholds drawn from rng, seeds unconditionally active.
RunResult simulate_seedset(const Topology& t, std::span<const std::size_t> seeds, Rng& rng);

struct WelfareEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t samples = 0;
};

enum class EstimatorEngine { threshold, live_edge };

WelfareEstimate expected_welfare_estimate(const Topology& t, std::span<const std::size_t> seeds,
                                          WelfareFunction w, std::size_t samples, Rng& rng,
                                          EstimatorEngine engine = EstimatorEngine::threshold);

// Exact expectation of the final-set welfare, by a stall-set recursion over
// subsets. Exponential in n; guarded at n <= 16.
double exact_expected_welfare(const Topology& t, std::span<const std::size_t> seeds,
                              WelfareFunction w);

struct GreedyOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  bool exact = false;  // evaluate candidates with the exact expectation instead
};

struct GreedyResult {
  std::vector<std::size_t> picks;  // in selection order
  std::vector<double> gains;       // estimated marginal value of each pick
  double value = 0.0;              // estimated expected welfare of the full set
};

// k rounds of argmax marginal gain. Candidate estimates within a round share
// the same threshold draws; ties go to the lowest node id.
GreedyResult greedy_seed(const Topology& t, std::size_t k, WelfareFunction w,
                         const GreedyOptions& opts = {});

struct InitialActivation {
  double probability = 0.0;
  bool below_floor = false;  // offer under the worst-case cost C_u
};

// Chance that a node accepts the offer pi with no help from anyone else.
InitialActivation initial_activation_probability(double c_total, double pi);

// Layered reduction instance from a graph: covering its edges with few
// node-layer seeds is what unlocks the bulk layer.
struct GadgetInstance {
  Topology topology;
  std::vector<double> pay;
  std::size_t vertices = 0;  // source graph N
  std::size_t edges = 0;     // source graph M
  std::size_t r = 0;
  std::size_t bulk = 0;      // M^r

  std::size_t primary_begin() const { return vertices; }
  std::size_t secondary_begin() const { return vertices + edges; }
  std::size_t bulk_begin() const { return vertices + 2 * edges; }
  std::size_t total() const { return vertices + 2 * edges + bulk; }
};

GadgetInstance vertex_cover_gadget(std::span<const std::pair<std::size_t, std::size_t>> edge_list,
                                   std::size_t vertices, std::size_t r);

// Deterministic run with the instance's fixed pay values; seeds are source
// graph vertex ids (the node layer).
RunResult run_gadget(const GadgetInstance& g, std::span<const std::size_t> seed_vertices);

}  // namespace cascade
