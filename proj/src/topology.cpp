#include "cascade/topology.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cascade {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

}  // namespace

LatencyMatrix parse_latency_matrix(const std::string& text,
                                   const std::string& origin) {
  const char* p = text.c_str();
  char* end = nullptr;

  errno = 0;
  const long long header = std::strtoll(p, &end, 10);
  if (end == p || errno == ERANGE || header <= 0)
    parse_fail(origin, "header must be a positive node count");
  const std::size_t n = static_cast<std::size_t>(header);
  if (n > 100000) parse_fail(origin, "node count too large");
  p = end;

  LatencyMatrix m;
  m.n = n;
  m.l.resize(n * n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      errno = 0;
      const double x = std::strtod(p, &end);
      if (end == p)
        parse_fail(origin, "row " + std::to_string(v) + ", column " +
                               std::to_string(u) + ": expected a number");
      if (errno == ERANGE || std::isnan(x) || std::isinf(x))
        parse_fail(origin, "row " + std::to_string(v) + ", column " +
                               std::to_string(u) + ": value out of range");
      if (v == u && x != 0.0)
        parse_fail(origin, "row " + std::to_string(v) +
                               ": diagonal entry must be 0");
      m.l[v * n + u] = x;
      p = end;
    }
  }
  while (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r') ++p;
  if (*p != '\0') parse_fail(origin, "trailing data after matrix body");
  return m;
}

LatencyMatrix load_latency_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_latency_matrix(buf.str(), path);
}

LatencyMatrix grid_latency(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("grid dimensions must be positive");
  if (rows > 100000 || cols > 100000 || rows * cols > 100000)
    throw std::invalid_argument("grid too large");
  const std::size_t n = rows * cols;

  LatencyMatrix m;
  m.n = n;
  m.l.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const long long ra = static_cast<long long>(a / cols);
    const long long ca = static_cast<long long>(a % cols);
    for (std::size_t b = 0; b < n; ++b) {
      const long long rb = static_cast<long long>(b / cols);
      const long long cb = static_cast<long long>(b % cols);
      m.l[a * n + b] =
          static_cast<double>(std::llabs(ra - rb) + std::llabs(ca - cb));
    }
  }
  return m;
}

Topology Topology::from_quality(std::size_t n,
                                const std::vector<double>& q_rowmajor,
                                std::vector<double> demand,
                                std::vector<double> cost,
                                std::vector<std::uint8_t> empty,
                                double gamma) {
  if (q_rowmajor.size() != n * n)
    throw std::invalid_argument("quality matrix size mismatch");
  if (demand.empty()) demand.assign(n, 1.0);
  if (cost.empty()) cost.assign(n, 1.0);
  if (empty.empty()) empty.assign(n, 0);
  if (demand.size() != n || cost.size() != n || empty.size() != n)
    throw std::invalid_argument("per-node vector size mismatch");

  Topology t;
  t.n_ = n;
  t.gamma_ = gamma;
  t.col_.resize(n * n);
  t.diag_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      const double q = q_rowmajor[v * n + u];
      if (!(q >= 0.0) || !(q <= 1.0))
        throw std::invalid_argument("quality entries must lie in [0,1]");
      t.col_[u * n + v] = q;
    }
    t.diag_[v] = q_rowmajor[v * n + v];
  }
  double dsum = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    if (!(demand[u] >= 0.0) || std::isinf(demand[u]))
      throw std::invalid_argument("demands must be finite and non-negative");
    if (!(cost[u] >= 0.0) || std::isinf(cost[u]))
      throw std::invalid_argument("costs must be finite and non-negative");
    dsum += demand[u];
  }
  t.d_ = std::move(demand);
  t.c_ = std::move(cost);
  t.empty_ = std::move(empty);
  t.demand_sum_ = dsum;
  return t;
}

std::size_t Topology::degree(std::size_t u) const {
  const double* col = incoming(u);
  std::size_t deg = 0;
  for (std::size_t v = 0; v < n_; ++v)
    if (v != u && col[v] > 0.0) ++deg;
  return deg;
}

double Topology::c_total(std::size_t u) const { return c_[u] * demand_sum_; }

Topology derive_quality(const LatencyMatrix& lat, double gamma,
                        std::vector<double> demand, std::vector<double> cost,
                        std::vector<std::uint8_t> empty) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const std::size_t n = lat.n;
  std::vector<double> q(n * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      if (v == u) {
        q[v * n + u] = 1.0;
        continue;
      }
      const double l = lat.at(v, u);
      if (l < 0.0) continue;  // no link
      const double p = 1.0 - l / gamma;
      q[v * n + u] = p > 0.0 ? p : 0.0;
    }
  }
  Topology t = Topology::from_quality(n, q, std::move(demand), std::move(cost),
                                      std::move(empty), gamma);
  return t;
}

NodeDerived node_derived(const Topology& t) {
  const std::size_t n = t.size();
  NodeDerived d;
  d.degree.resize(n);
  d.c_total.resize(n);
  double total = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    d.degree[u] = t.degree(u);
    d.c_total[u] = t.c_total(u);
    total += static_cast<double>(d.degree[u]);
  }
  d.avg_degree = n > 0 ? total / static_cast<double>(n) : 0.0;
  return d;
}

}  // namespace cascade
