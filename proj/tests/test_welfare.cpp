#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cascade/coverage.hpp"
#include "cascade/rng.hpp"
#include "cascade/topology.hpp"
#include "cascade/welfare.hpp"

using namespace cascade;

namespace {

Topology two_clique() { return Topology::from_quality(2, {1.0, 1.0, 1.0, 1.0}); }

Topology random_instance(std::size_t n, Rng& rng) {
  std::vector<double> q(n * n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      q[v * n + u] = v == u ? 1.0 : (rng.below(4) == 0 ? 0.0 : rng.uniform());
  return Topology::from_quality(n, q);
}

}  // namespace

TEST_CASE("welfare names round-trip") {
  CHECK(parse_welfare("active") == WelfareFunction::active_count);
  CHECK(parse_welfare("serviced") == WelfareFunction::serviced_count);
  CHECK(parse_welfare("sum") == WelfareFunction::sum_welfare);
  CHECK(parse_welfare("max") == WelfareFunction::max_welfare);
  for (WelfareFunction w : {WelfareFunction::active_count, WelfareFunction::serviced_count,
                            WelfareFunction::sum_welfare, WelfareFunction::max_welfare})
    CHECK(parse_welfare(to_string(w)) == w);
  CHECK_THROWS_AS(parse_welfare("utility"), std::invalid_argument);
}

TEST_CASE("two-clique welfare by hand") {
  Topology t = two_clique();
  std::vector<std::uint8_t> none = {0, 0};
  std::vector<std::uint8_t> one = {1, 0};
  std::vector<std::uint8_t> both = {1, 1};

  WelfareSummary s = evaluate_all(none, t);
  CHECK(s.active_count == 0.0);
  CHECK(s.serviced_count == 0.0);
  CHECK(s.sum_welfare == 0.0);
  CHECK(s.max_welfare == 0.0);

  s = evaluate_all(one, t);
  CHECK(s.active_count == 1.0);
  CHECK(s.serviced_count == 2.0);
  CHECK(s.sum_welfare == 2.0);
  CHECK(s.max_welfare == 2.0);

  s = evaluate_all(both, t);
  CHECK(s.active_count == 2.0);
  CHECK(s.serviced_count == 2.0);
  CHECK(s.sum_welfare == 4.0);
  CHECK(s.max_welfare == 2.0);

  CHECK(evaluate(WelfareFunction::sum_welfare, both, t) == 4.0);
  CHECK(evaluate(WelfareFunction::max_welfare, std::uint64_t{0b01}, t) == 2.0);
  CHECK(evaluate(WelfareFunction::active_count, std::uint64_t{0b11}, t) == 2.0);
}

TEST_CASE("mask and flag evaluation agree on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    Topology t = random_instance(n, rng);
    for (int rep = 0; rep < 8; ++rep) {
      const std::uint64_t mask = rng.next() & ((std::uint64_t{1} << n) - 1);
      std::vector<std::uint8_t> flags(n, 0);
      for (std::size_t u = 0; u < n; ++u) flags[u] = (mask >> u) & 1;
      for (WelfareFunction w : {WelfareFunction::active_count, WelfareFunction::serviced_count,
                                WelfareFunction::sum_welfare, WelfareFunction::max_welfare})
        CHECK(evaluate(w, flags, t) == evaluate(w, mask, t));
    }
  }
}

TEST_CASE("serviced counting follows positive incoming quality") {
  // node 2 hears nobody; node 0 only hears node 1
  std::vector<double> q = {
      1.0, 0.5, 0.0,  //
      0.0, 1.0, 0.0,  //
      0.0, 0.0, 1.0,  //
  };
  Topology t = Topology::from_quality(3, q);
  CHECK(evaluate(WelfareFunction::serviced_count, std::uint64_t{0b010}, t) == 2.0);
  CHECK(evaluate(WelfareFunction::serviced_count, std::uint64_t{0b001}, t) == 1.0);
  CHECK(evaluate(WelfareFunction::serviced_count, std::uint64_t{0b100}, t) == 1.0);
  CHECK(evaluate(WelfareFunction::max_welfare, std::uint64_t{0b010}, t) == 1.5);
}

TEST_CASE("the lattice checker sees through cardinality squared") {
  SubsetFunction sq = SubsetFunction::tabulate(4, [](std::uint64_t m) {
    const double k = static_cast<double>(std::popcount(m));
    return k * k;
  });
  SubmodularityReport rep = is_monotone_submodular(sq);
  CHECK(rep.monotone);
  CHECK_FALSE(rep.submodular);
  CHECK(rep.submodular_violation_count > 0);
  REQUIRE(!rep.submodular_violations.empty());
  CHECK(rep.submodular_violations[0].gap < 0.0);
  CHECK_FALSE(rep.ok());

  SubsetFunction card = SubsetFunction::tabulate(
      4, [](std::uint64_t m) { return static_cast<double>(std::popcount(m)); });
  CHECK(is_monotone_submodular(card).ok());
}

TEST_CASE("welfare lifted to sets of providers is monotone and submodular") {
  Rng rng(91);
  for (int trial = 0; trial < 4; ++trial) {
    Topology t = random_instance(5, rng);
    for (WelfareFunction w : {WelfareFunction::max_welfare, WelfareFunction::serviced_count,
                              WelfareFunction::active_count}) {
      SubsetFunction f = SubsetFunction::tabulate(
          5, [&](std::uint64_t mask) { return evaluate(w, mask, t); });
      CHECK(is_monotone_submodular(f).ok());
    }
  }
}

TEST_CASE("monotonicity violations are reported with their witnesses") {
  SubsetFunction drop = SubsetFunction::tabulate(
      3, [](std::uint64_t m) { return m == 0 ? 1.0 : 0.0; });
  SubmodularityReport rep = is_monotone_submodular(drop);
  CHECK_FALSE(rep.monotone);
  CHECK(rep.monotone_violation_count > 0);
  REQUIRE(!rep.monotone_violations.empty());
  CHECK(rep.monotone_violations[0].small == 0);
  CHECK(rep.monotone_violations[0].gap == doctest::Approx(-1.0));
}
