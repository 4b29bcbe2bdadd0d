#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cascade {

// Dense pairwise latency matrix, row-major: l(v, u) is the latency from v to
// u. Negative entries mean "no link"; the diagonal must be zero.
struct LatencyMatrix {
  std::size_t n = 0;
  std::vector<double> l;

  double at(std::size_t v, std::size_t u) const { return l[v * n + u]; }
  double& at(std::size_t v, std::size_t u) { return l[v * n + u]; }
};

// Parse a latency file: first line the node count n, then n lines of n
// whitespace-separated reals. Errors name the offending row/column.
LatencyMatrix load_latency_matrix(const std::string& path);
LatencyMatrix parse_latency_matrix(const std::string& text,
                                   const std::string& origin);

// Synthetic grid of rows x cols nodes with Manhattan-distance latencies.
LatencyMatrix grid_latency(std::size_t rows, std::size_t cols);

// A network instance: per-pair download quality P[v][u] in [0,1] (the quality
// downloader v gets from sharer u), per-node demand and cost, and flags for
// nodes that never share ("empty" nodes, which still have demand).
//
// Quality is stored by sharer column so that the per-candidate sums the
// engine runs are contiguous scans.
class Topology {
 public:
  Topology() = default;

  // Build directly from a quality matrix given in row-major order
  // (q_rowmajor[v*n + u] = P[v][u]). Empty vectors mean all-ones demand/cost
  // and no empty nodes.
  static Topology from_quality(std::size_t n, const std::vector<double>& q_rowmajor,
                               std::vector<double> demand = {},
                               std::vector<double> cost = {},
                               std::vector<std::uint8_t> empty = {},
                               double gamma = 0.0);

  std::size_t size() const { return n_; }
  double gamma() const { return gamma_; }

  // P[v][u]: quality downloader v sees from sharer u.
  double quality(std::size_t v, std::size_t u) const { return col_[u * n_ + v]; }
  // Contiguous column over downloaders v for a fixed sharer u.
  const double* incoming(std::size_t u) const { return col_.data() + u * n_; }
  // Diagonal P[v][v] as a contiguous vector.
  const double* diagonal() const { return diag_.data(); }

  const std::vector<double>& demand() const { return d_; }
  const std::vector<double>& cost() const { return c_; }
  const std::vector<std::uint8_t>& empty() const { return empty_; }
  bool is_empty(std::size_t u) const { return empty_[u] != 0; }

  // Nodes with positive quality toward sharer u, excluding u itself.
  std::size_t degree(std::size_t u) const;

  // c_u times total demand: the worst-case load a lone sharer can face.
  double c_total(std::size_t u) const;

 private:
  std::size_t n_ = 0;
  double gamma_ = 0.0;
  std::vector<double> col_;   // column-major quality
  std::vector<double> diag_;
  std::vector<double> d_, c_;
  std::vector<std::uint8_t> empty_;
  double demand_sum_ = 0.0;
};

// Threshold rule turning latencies into qualities: P[v][u] = max(0, 1 - l/gamma)
// for linked pairs, 0 for no-link pairs, 1 on the diagonal. gamma must be > 0.
Topology derive_quality(const LatencyMatrix& lat, double gamma,
                        std::vector<double> demand = {},
                        std::vector<double> cost = {},
                        std::vector<std::uint8_t> empty = {});

// Per-node derived quantities.
struct NodeDerived {
  std::vector<std::size_t> degree;
  std::vector<double> c_total;
  double avg_degree = 0.0;
};

NodeDerived node_derived(const Topology& t);

}  // namespace cascade
