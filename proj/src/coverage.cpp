#include "cascade/coverage.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cascade {
namespace {

std::string mask_to_string(std::uint64_t mask) {
  std::string out = "{";
  bool first = true;
  for (int b = 0; b < 64; ++b) {
    if (mask >> b & 1) {
      if (!first) out += ",";
      out += std::to_string(b);
      first = false;
    }
  }
  out += "}";
  return out;
}

void check_lattice_size(std::size_t k) {
  if (k == 0) throw std::invalid_argument("universe must be nonempty");
  if (k > 12) throw std::invalid_argument("incidence matrix size overflow, limit is 12 elements");
}

void check_universe(std::size_t k) {
  if (k == 0 || k > 63) throw std::invalid_argument("universe size out of range");
}

}  // namespace

std::size_t canonical_index(std::size_t k, std::uint64_t subset) {
  check_universe(k);
  if (subset == 0) throw std::invalid_argument("empty subset has no canonical position");
  if (subset >> k) throw std::invalid_argument("subset exceeds the universe");
  return static_cast<std::size_t>(subset - 1);
}

std::uint64_t canonical_subset(std::size_t k, std::size_t position) {
  check_universe(k);
  if (position >= subset_count(k)) throw std::invalid_argument("canonical position out of range");
  return static_cast<std::uint64_t>(position) + 1;
}

IntMatrix incidence_matrix(std::size_t k) {
  check_lattice_size(k);
  const std::size_t m = subset_count(k);
  IntMatrix A(m, m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t)
      A.at(s, t) = (((s + 1) & (t + 1)) != 0) ? 1 : 0;
  return A;
}

IntMatrix inverse_incidence(std::size_t k) {
  check_lattice_size(k);
  const std::size_t m = subset_count(k);
  const std::uint64_t full = m;
  IntMatrix B(m, m);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t t = 0; t < m; ++t) {
      const std::uint64_t sm = s + 1;
      const std::uint64_t tm = t + 1;
      if ((sm | tm) != full) continue;
      B.at(s, t) = (std::popcount(sm & tm) & 1) ? 1 : -1;
    }
  }
  return B;
}

IntMatrix multiply(const IntMatrix& lhs, const IntMatrix& rhs) {
  if (lhs.cols != rhs.rows) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(lhs.rows, rhs.cols);
  for (std::size_t i = 0; i < lhs.rows; ++i)
    for (std::size_t k = 0; k < lhs.cols; ++k) {
      const long long x = lhs.at(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < rhs.cols; ++j) out.at(i, j) += x * rhs.at(k, j);
    }
  return out;
}

SubsetFunction::SubsetFunction(std::size_t n_, std::vector<double> v) : n(n_), values(std::move(v)) {
  if (n > 24) throw std::invalid_argument("subset function universe too large");
  if (values.size() != (std::size_t{1} << n))
    throw std::invalid_argument("subset function needs one value per subset");
}

SubsetFunction SubsetFunction::tabulate(std::size_t n,
                                        const std::function<double(std::uint64_t)>& fn) {
  if (n > 24) throw std::invalid_argument("subset function universe too large");
  std::vector<double> v(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < v.size(); ++mask) v[mask] = fn(mask);
  return SubsetFunction(n, std::move(v));
}

double discrete_derivative(const SubsetFunction& f, std::uint64_t T, std::uint64_t W) {
  if ((T | W) >> f.n) throw std::invalid_argument("sets exceed the universe");
  const int tbits = std::popcount(T);
  double acc = 0.0;
  std::uint64_t s = T;
  while (true) {
    const int sign = ((tbits - std::popcount(s)) & 1) ? -1 : 1;
    acc += sign * f(W | s);
    if (s == 0) break;
    s = (s - 1) & T;
  }
  return acc;
}

CoverageCheck check_coverage_conditions(const SubsetFunction& f, double tol) {
  CoverageCheck out;
  const std::uint64_t full = (std::uint64_t{1} << f.n) - 1;

  out.empty_value = f(0);
  if (std::fabs(out.empty_value) > tol) {
    out.pass = false;
    out.spontaneous = true;
  }
  double worst = std::min(0.0, -std::fabs(out.empty_value));

  // T = empty asks f(full) >= 0; every other T constrains the weight
  // (-1)^(|T|+1) * derivative at the complement.
  const double head = f(full);
  worst = std::min(worst, head);
  if (head < -tol) {
    out.pass = false;
    out.violations.emplace_back(0, head);
  }
  for (std::uint64_t T = 1; T <= full; ++T) {
    const double d = discrete_derivative(f, T, full & ~T);
    const double w = (std::popcount(T) & 1) ? d : -d;
    worst = std::min(worst, w);
    if (w < -tol) {
      out.pass = false;
      out.violations.emplace_back(T, w);
    }
  }
  out.worst = worst;
  return out;
}

EdgeDistribution edge_distribution(const SubsetFunction& f, double tol) {
  const std::uint64_t full = (std::uint64_t{1} << f.n) - 1;
  EdgeDistribution out;
  out.k = f.n;
  out.q.assign(full + 1, 0.0);
  out.raw.assign(full + 1, 0.0);
  out.min_raw = 0.0;

  for (std::uint64_t T = 1; T <= full; ++T) {
    const double d = discrete_derivative(f, T, full & ~T);
    const double raw = (std::popcount(T) & 1) ? d : -d;
    out.raw[T] = raw;
    out.min_raw = std::min(out.min_raw, raw);
    if (raw < -tol)
      throw std::invalid_argument("not a coverage function: weight " + std::to_string(raw) +
                                  " at T=" + mask_to_string(T));
    out.q[T] = (std::fabs(raw) < tol) ? 0.0 : raw;
  }

  double rest = 0.0;
  for (std::uint64_t T = 1; T <= full; ++T) rest += out.q[T];
  const double raw0 = 1.0 - rest;
  out.raw[0] = 1.0 - f(full);
  out.min_raw = std::min(out.min_raw, out.raw[0]);
  if (raw0 < -tol)
    throw std::invalid_argument("not a coverage function: source weights sum to " +
                                std::to_string(rest));
  out.q[0] = (std::fabs(raw0) < tol) ? 0.0 : raw0;
  return out;
}

std::uint64_t expand_mask(std::uint64_t local, std::span<const std::size_t> universe) {
  std::uint64_t global = 0;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (local >> i & 1) global |= std::uint64_t{1} << universe[i];
  return global;
}

std::uint64_t lift_source_mask(std::size_t u, std::uint64_t local, std::size_t n) {
  std::uint64_t global = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (local >> i & 1) global |= std::uint64_t{1} << (i < u ? i : i + 1);
  return global;
}

namespace {

void check_dists(std::span<const EdgeDistribution> dists) {
  const std::size_t n = dists.size();
  if (n == 0) throw std::invalid_argument("no nodes");
  if (n > 64) throw std::invalid_argument("too many nodes for bitmask states");
  for (const auto& dist : dists) {
    if (n > 1 && dist.k != n - 1)
      throw std::invalid_argument("each node needs a distribution over the other nodes");
    double total = 0.0;
    for (double p : dist.q) {
      if (p < 0.0) throw std::invalid_argument("negative source probability");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-6)
      throw std::invalid_argument("source probabilities must sum to 1");
  }
}

}  // namespace

std::vector<std::uint64_t> sample_graph(std::span<const EdgeDistribution> dists, Rng& rng) {
  check_dists(dists);
  const std::size_t n = dists.size();
  std::vector<std::uint64_t> masks(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& q = dists[u].q;
    const double r = rng.uniform();
    double cum = 0.0;
    std::uint64_t pick = 0;
    for (std::uint64_t local = 0; local < q.size(); ++local) {
      if (q[local] == 0.0) continue;
      cum += q[local];
      pick = local;
      if (r < cum) break;
    }
    masks[u] = lift_source_mask(u, pick, n);
  }
  return masks;
}

std::uint64_t reachable(std::span<const std::uint64_t> in_masks, std::uint64_t seed_mask) {
  std::uint64_t active = seed_mask;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < in_masks.size(); ++u) {
      const std::uint64_t bit = std::uint64_t{1} << u;
      if ((active & bit) == 0 && (in_masks[u] & active) != 0) {
        active |= bit;
        changed = true;
      }
    }
  }
  return active;
}

std::map<std::uint64_t, double> exact_final_distribution(std::span<const EdgeDistribution> dists,
                                                         std::uint64_t seed_mask,
                                                         std::uint64_t max_configs) {
  check_dists(dists);
  const std::size_t n = dists.size();

  // Per-node supports in global ids.
  std::vector<std::vector<std::pair<std::uint64_t, double>>> support(n);
  std::uint64_t configs = 1;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::uint64_t local = 0; local < dists[u].q.size(); ++local)
      if (dists[u].q[local] > 0.0)
        support[u].emplace_back(lift_source_mask(u, local, n), dists[u].q[local]);
    if (support[u].empty()) support[u].emplace_back(0, 1.0);
    if (configs > max_configs / support[u].size())
      throw std::invalid_argument(
          "too many source configurations to enumerate; use Monte Carlo sampling instead");
    configs *= support[u].size();
  }

  std::map<std::uint64_t, double> dist;
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::uint64_t> masks(n, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t u = 0; u < n; ++u) {
      masks[u] = support[u][idx[u]].first;
      p *= support[u][idx[u]].second;
    }
    if (p > 0.0) dist[reachable(masks, seed_mask)] += p;

    std::size_t u = 0;
    for (; u < n; ++u) {
      if (++idx[u] < support[u].size()) break;
      idx[u] = 0;
    }
    if (u == n) break;
  }
  return dist;
}

}  // namespace cascade
