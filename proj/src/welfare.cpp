#include "cascade/welfare.hpp"

#include <stdexcept>

#include "cascade/kernels.hpp"

namespace cascade {

std::string to_string(WelfareFunction w) {
  switch (w) {
    case WelfareFunction::active_count: return "active";
    case WelfareFunction::serviced_count: return "serviced";
    case WelfareFunction::sum_welfare: return "sum";
    case WelfareFunction::max_welfare: return "max";
  }
  return "?";
}

WelfareFunction parse_welfare(std::string_view name) {
  if (name == "active") return WelfareFunction::active_count;
  if (name == "serviced") return WelfareFunction::serviced_count;
  if (name == "sum") return WelfareFunction::sum_welfare;
  if (name == "max") return WelfareFunction::max_welfare;
  throw std::invalid_argument("unknown welfare function '" + std::string(name) +
                              "', expected active|serviced|sum|max");
}

WelfareSummary evaluate_all(std::span<const std::uint8_t> active, const Topology& t) {
  const std::size_t n = t.size();
  if (active.size() != n) throw std::invalid_argument("active flag vector length mismatch");
  WelfareSummary out;
  std::vector<double> offered(n, 0.0);
  std::vector<double> best(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    if (!active[u]) continue;
    out.active_count += 1.0;
    kern::accumulate(offered.data(), t.incoming(u), n);
    kern::max_update(best.data(), t.incoming(u), n);
  }
  out.sum_welfare = kern::sum(offered.data(), n);
  out.max_welfare = kern::sum(best.data(), n);
  out.serviced_count = static_cast<double>(kern::count_positive(best.data(), n));
  return out;
}

double evaluate(WelfareFunction w, std::span<const std::uint8_t> active, const Topology& t) {
  const WelfareSummary s = evaluate_all(active, t);
  switch (w) {
    case WelfareFunction::active_count: return s.active_count;
    case WelfareFunction::serviced_count: return s.serviced_count;
    case WelfareFunction::sum_welfare: return s.sum_welfare;
    case WelfareFunction::max_welfare: return s.max_welfare;
  }
  return 0.0;
}

double evaluate(WelfareFunction w, std::uint64_t active_mask, const Topology& t) {
  const std::size_t n = t.size();
  if (n > 64) throw std::invalid_argument("too many nodes for bitmask form");
  std::vector<std::uint8_t> flags(n, 0);
  for (std::size_t u = 0; u < n; ++u) flags[u] = (active_mask >> u) & 1;
  return evaluate(w, flags, t);
}

SubmodularityReport is_monotone_submodular(const SubsetFunction& f, double tol) {
  if (f.n > 12) throw std::invalid_argument("exhaustive lattice check limited to 12 elements");
  const std::uint64_t full = (std::uint64_t{1} << f.n) - 1;
  SubmodularityReport out;
  constexpr std::size_t kKeep = 100;

  for (std::uint64_t S = 0; S <= full; ++S) {
    for (std::size_t v = 0; v < f.n; ++v) {
      const std::uint64_t bit = std::uint64_t{1} << v;
      if (S & bit) continue;
      const double gap = f(S | bit) - f(S);
      if (gap < -tol) {
        out.monotone = false;
        out.monotone_violation_count += 1;
        if (out.monotone_violations.size() < kKeep)
          out.monotone_violations.push_back({S, S | bit, bit, gap});
      }
    }
  }

  for (std::uint64_t T = 0; T <= full; ++T) {
    // All S within T, via submask enumeration (T itself included).
    std::uint64_t S = T;
    while (true) {
      for (std::size_t v = 0; v < f.n; ++v) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (T & bit) continue;
        const double gap = (f(S | bit) - f(S)) - (f(T | bit) - f(T));
        if (gap < -tol) {
          out.submodular = false;
          out.submodular_violation_count += 1;
          if (out.submodular_violations.size() < kKeep)
            out.submodular_violations.push_back({S, T, bit, gap});
        }
      }
      if (S == 0) break;
      S = (S - 1) & T;
    }
  }
  return out;
}

}  // namespace cascade
