#include "cascade/seedset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cascade {
namespace {

std::uint64_t seed_mask_of(std::span<const std::size_t> seeds, std::size_t n) {
  std::uint64_t mask = 0;
  for (std::size_t s : seeds) {
    if (s >= n) throw std::invalid_argument("seed id out of range");
    mask |= std::uint64_t{1} << s;
  }
  return mask;
}

void require_no_empty(const Topology& t, const char* what) {
  for (std::size_t u = 0; u < t.size(); ++u)
    if (t.is_empty(u)) throw std::invalid_argument(std::string(what) + " does not support empty nodes");
}

std::vector<double> max_payments(const Topology& t) {
  std::vector<double> pi(t.size());
  for (std::size_t u = 0; u < t.size(); ++u) pi[u] = t.c_total(u);
  return pi;
}

struct Accumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double se() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

// Bits of a global node mask, skipping position u, packed down to n-1 bits.
std::uint64_t drop_node_bit(std::uint64_t mask, std::size_t u) {
  const std::uint64_t low = (std::uint64_t{1} << u) - 1;
  return (mask & low) | ((mask >> (u + 1)) << u);
}

}  // namespace

SeedActivation activation_function(const Topology& t, std::size_t u) {
  const std::size_t n = t.size();
  if (u >= n) throw std::invalid_argument("node id out of range");
  const double c_total = t.c_total(u);
  if (!(c_total > 0.0))
    throw std::invalid_argument("degenerate node " + std::to_string(u) +
                                ": no possible demand, activation is free");

  SeedActivation out;
  out.node = u;
  out.c_total = c_total;
  for (std::size_t v = 0; v < n; ++v)
    if (v != u) out.universe.push_back(v);

  std::vector<std::uint8_t> flags(n, 0);
  out.f = SubsetFunction::tabulate(n - 1, [&](std::uint64_t local) {
    std::fill(flags.begin(), flags.end(), 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (local >> i & 1) flags[out.universe[i]] = 1;
    const double cost = perceived_cost(BehaviorModel::demand, t, flags, u);
    return 1.0 - cost / c_total;
  });
  return out;
}

std::vector<EdgeDistribution> edge_distributions(const Topology& t, double tol) {
  require_no_empty(t, "the source-set view");
  std::vector<EdgeDistribution> dists;
  dists.reserve(t.size());
  for (std::size_t u = 0; u < t.size(); ++u)
    dists.push_back(edge_distribution(activation_function(t, u).f, tol));
  return dists;
}

RunResult simulate_seedset(const Topology& t, std::span<const std::size_t> seeds, Rng& rng) {
  const std::size_t n = t.size();
  std::vector<double> lambda(n);
  for (double& l : lambda) l = rng.uniform();
  return run_to_fixpoint(BehaviorModel::demand, t, max_payments(t), lambda, seeds);
}

WelfareEstimate expected_welfare_estimate(const Topology& t, std::span<const std::size_t> seeds,
                                          WelfareFunction w, std::size_t samples, Rng& rng,
                                          EstimatorEngine engine) {
  if (samples == 0) throw std::invalid_argument("at least one sample is required");
  Accumulator acc;
  if (engine == EstimatorEngine::threshold) {
    for (std::size_t j = 0; j < samples; ++j) {
      const RunResult run = simulate_seedset(t, seeds, rng);
      acc.add(evaluate(w, run.active, t));
    }
  } else {
    if (t.size() > 64) throw std::invalid_argument("too many nodes for bitmask states");
    const std::vector<EdgeDistribution> dists = edge_distributions(t);
    const std::uint64_t seed_mask = seed_mask_of(seeds, t.size());
    for (std::size_t j = 0; j < samples; ++j) {
      const std::vector<std::uint64_t> graph = sample_graph(dists, rng);
      acc.add(evaluate(w, reachable(graph, seed_mask), t));
    }
  }
  return {acc.mean, acc.se(), samples};
}

double exact_expected_welfare(const Topology& t, std::span<const std::size_t> seeds,
                              WelfareFunction w) {
  const std::size_t n = t.size();
  if (n > 16) throw std::invalid_argument("exact expectation limited to 16 nodes");
  require_no_empty(t, "the exact expectation");

  // f_u over global masks, compressed to skip u's own bit.
  std::vector<std::vector<double>> f(n);
  for (std::size_t u = 0; u < n; ++u) f[u] = activation_function(t, u).f.values;
  const auto f_at = [&](std::size_t u, std::uint64_t set) {
    return f[u][drop_node_bit(set, u)];
  };

  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  const std::uint64_t seed_mask = seed_mask_of(seeds, n);
  const std::uint64_t comp = full & ~seed_mask;

  // rho[X]: probability that the cascade confined to seeds|X fills it entirely.
  // It fails exactly when it stalls at some proper stage, so subtract the
  // stall probabilities; growth X is enumerated in ascending submask order.
  std::vector<double> rho(full + 1, 0.0);
  double expectation = 0.0;
  std::uint64_t X = 0;
  while (true) {
    double stall = 0.0;
    for (std::uint64_t Y = X; Y != 0;) {
      Y = (Y - 1) & X;  // proper submasks of X, plus the empty stage
      double hold = rho[Y];
      if (hold > 0.0) {
        const std::uint64_t stage = seed_mask | Y;
        for (std::uint64_t rest = X & ~Y; rest != 0; rest &= rest - 1) {
          const std::size_t u = static_cast<std::size_t>(std::countr_zero(rest));
          hold *= 1.0 - f_at(u, stage);
        }
        stall += hold;
      }
      if (Y == 0) break;
    }
    rho[X] = (X == 0) ? 1.0 : 1.0 - stall;

    const std::uint64_t T = seed_mask | X;
    double outside = rho[X];
    if (outside > 0.0) {
      for (std::uint64_t rest = full & ~T; rest != 0; rest &= rest - 1) {
        const std::size_t u = static_cast<std::size_t>(std::countr_zero(rest));
        outside *= 1.0 - f_at(u, T);
      }
      expectation += outside * evaluate(w, T, t);
    }

    if (X == comp) break;
    X = (X - comp) & comp;
  }
  return expectation;
}

GreedyResult greedy_seed(const Topology& t, std::size_t k, WelfareFunction w,
                         const GreedyOptions& opts) {
  const std::size_t n = t.size();
  if (k == 0) throw std::invalid_argument("need at least one seed to pick");
  if (k > n) throw std::invalid_argument("cannot seed more nodes than exist");
  if (!opts.exact && opts.samples == 0) throw std::invalid_argument("at least one sample is required");

  const std::vector<double> pi = max_payments(t);
  GreedyResult out;
  std::vector<std::uint8_t> picked(n, 0);
  std::vector<std::size_t> trial;
  std::vector<double> lambda(n);
  double prev_value = 0.0;

  for (std::size_t round = 0; round < k; ++round) {
    double best_value = 0.0;
    std::size_t best = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (picked[c] || t.is_empty(c)) continue;
      trial.assign(out.picks.begin(), out.picks.end());
      trial.push_back(c);
      double value;
      if (opts.exact) {
        value = exact_expected_welfare(t, trial, w);
      } else {
        // Same generator seed for every candidate: common random numbers.
        Rng rng(mix_seed({opts.seed, round}));
        double total = 0.0;
        for (std::size_t j = 0; j < opts.samples; ++j) {
          for (double& l : lambda) l = rng.uniform();
          const RunResult run = run_to_fixpoint(BehaviorModel::demand, t, pi, lambda, trial);
          total += evaluate(w, run.active, t);
        }
        value = total / static_cast<double>(opts.samples);
      }
      if (best == n || value > best_value) {
        best = c;
        best_value = value;
      }
    }
    if (best == n) break;  // nothing left to seed
    picked[best] = 1;
    out.picks.push_back(best);
    out.gains.push_back(best_value - prev_value);
    prev_value = best_value;
  }
  out.value = prev_value;
  return out;
}

InitialActivation initial_activation_probability(double c_total, double pi) {
  if (!(c_total > 0.0)) throw std::invalid_argument("worst-case cost must be positive");
  if (pi < c_total) return {0.0, true};
  return {1.0 - c_total / pi, false};
}

GadgetInstance vertex_cover_gadget(std::span<const std::pair<std::size_t, std::size_t>> edge_list,
                                   std::size_t vertices, std::size_t r) {
  if (vertices < 2) throw std::invalid_argument("source graph needs at least two vertices");
  if (edge_list.empty()) throw std::invalid_argument("source graph has no edges");
  if (r == 0) throw std::invalid_argument("bulk exponent must be at least 1");

  const std::size_t N = vertices;
  const std::size_t M = edge_list.size();
  std::vector<std::uint8_t> touched(N, 0);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(M);
  for (auto [a, b] : edge_list) {
    if (a >= N || b >= N) throw std::invalid_argument("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self loops are not allowed");
    auto e = std::minmax(a, b);
    if (std::find(edges.begin(), edges.end(), std::pair(e.first, e.second)) != edges.end())
      throw std::invalid_argument("duplicate edge in source graph");
    edges.emplace_back(e.first, e.second);
    touched[a] = touched[b] = 1;
  }
  for (std::size_t u = 0; u < N; ++u)
    if (!touched[u])
      throw std::invalid_argument("isolated vertex " + std::to_string(u) + " in source graph");
  if (2 * M < N) throw std::invalid_argument("source graph needs at least N/2 edges");

  constexpr std::size_t kMaxNodes = 4096;
  std::size_t bulk = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (bulk > kMaxNodes / M) throw std::invalid_argument("gadget too large");
    bulk *= M;
  }
  const std::size_t n = N + 2 * M + bulk;
  if (n > kMaxNodes) throw std::invalid_argument("gadget too large");

  GadgetInstance g;
  g.vertices = N;
  g.edges = M;
  g.r = r;
  g.bulk = bulk;

  std::vector<double> q(n * n, 0.0);
  std::vector<double> d(n, 0.0);
  g.pay.assign(n, 0.0);
  for (std::size_t e = 0; e < M; ++e) {
    const std::size_t x = N + e;        // primary
    const std::size_t xp = N + M + e;   // secondary
    q[x * n + edges[e].first] = 1.0;
    q[x * n + edges[e].second] = 1.0;
    q[x * n + x] = 1.0;  // a primary node can serve itself
    q[xp * n + x] = 1.0;
    for (std::size_t i = 0; i < bulk; ++i) q[xp * n + (N + 2 * M + i)] = 1.0;
    d[x] = 2.0;
    d[xp] = 2.0;
    g.pay[x] = 3.5;
  }
  for (std::size_t i = 0; i < bulk; ++i) g.pay[N + 2 * M + i] = static_cast<double>(M) + 0.5;

  g.topology = Topology::from_quality(n, q, std::move(d));
  return g;
}

RunResult run_gadget(const GadgetInstance& g, std::span<const std::size_t> seed_vertices) {
  for (std::size_t s : seed_vertices)
    if (s >= g.vertices) throw std::invalid_argument("gadget seeds must be source graph vertices");
  const std::vector<double> ones(g.total(), 1.0);
  return run_to_fixpoint(BehaviorModel::demand, g.topology, g.pay, ones, seed_vertices);
}

}  // namespace cascade
