#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/coverage.hpp"
#include "cascade/topology.hpp"

namespace cascade {

enum class WelfareFunction { active_count, serviced_count, sum_welfare, max_welfare };

std::string to_string(WelfareFunction w);
WelfareFunction parse_welfare(std::string_view name);  // active | serviced | sum | max

struct WelfareSummary {
  double active_count = 0.0;
  double serviced_count = 0.0;  // nodes that can download from some active node
  double sum_welfare = 0.0;     // total quality offered to every node
  double max_welfare = 0.0;     // best single provider quality, summed over nodes
};

WelfareSummary evaluate_all(std::span<const std::uint8_t> active, const Topology& t);

double evaluate(WelfareFunction w, std::span<const std::uint8_t> active, const Topology& t);
double evaluate(WelfareFunction w, std::uint64_t active_mask, const Topology& t);

struct LatticeViolation {
  std::uint64_t small = 0;
  std::uint64_t big = 0;
  std::uint64_t element = 0;
  double gap = 0.0;  // the quantity that should have been >= 0
};

struct SubmodularityReport {
  bool monotone = true;
  bool submodular = true;
  std::size_t monotone_violation_count = 0;
  std::size_t submodular_violation_count = 0;
  // At most 100 of each are stored; counts give the full totals.
  std::vector<LatticeViolation> monotone_violations;
  std::vector<LatticeViolation> submodular_violations;
  bool ok() const { return monotone && submodular; }
};

// Exhaustive check over the whole lattice: monotone on covering pairs, and
// diminishing returns in the single-element form f(S+v)-f(S) >= f(T+v)-f(T)
// for all S within T, v outside T.
SubmodularityReport is_monotone_submodular(const SubsetFunction& f, double tol = 1e-10);

}  // namespace cascade
