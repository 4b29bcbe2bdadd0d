#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/topology.hpp"

namespace cascade {

enum class BehaviorModel { demand, one_hop, no_network };

std::string to_string(BehaviorModel model);
BehaviorModel parse_model(std::string_view name);  // demand | onehop | nonetwork

// Payment rule: pi_u = alpha * degree(u)^beta (0^0 := 1), or explicit offers.
struct PaymentScheme {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> offers;  // when non-empty, used verbatim

  static PaymentScheme degree_power(double alpha, double beta);
  static PaymentScheme explicit_offers(std::vector<double> pi);
};

std::vector<double> payments_for(const Topology& t, const PaymentScheme& scheme);

// State of one run. pay[u] = lambda[u] * pi[u] is fixed for the whole run;
// the remaining fields are caches the stepper keeps consistent with `active`.
struct SharingState {
  std::vector<std::uint8_t> active;
  std::vector<double> lambda;
  std::vector<double> pay;
  std::size_t round = 0;

  std::vector<std::uint8_t> empty;
  std::vector<double> denom;      // per row v: quality mass of active columns
  std::vector<double> act;        // active flags as 0.0/1.0 for the kernels
  std::vector<std::vector<std::size_t>> waves;
};

SharingState make_state(const Topology& t, std::span<const double> pi,
                        std::span<const double> lambda,
                        std::span<const std::size_t> seeds = {},
                        std::span<const std::uint8_t> empty_override = {});

// Load node u would carry if it joined the given active set (u itself counts
// in the denominators whether or not the flag is set). Reference path, O(n^2)
// for the demand model.
double perceived_cost(BehaviorModel model, const Topology& t,
                      std::span<const std::uint8_t> active, std::size_t u);

double perceived_utility(BehaviorModel model, const Topology& t,
                         std::span<const std::uint8_t> active, std::size_t u, double pay_u);

// One simultaneous round: every inactive non-empty node joins iff its utility
// against the previous active set is strictly positive. Returns the new ids.
std::vector<std::size_t> step(BehaviorModel model, const Topology& t, SharingState& state);

struct RunResult {
  std::vector<std::uint8_t> active;
  std::vector<std::size_t> active_ids;
  std::size_t rounds = 0;         // includes the final round that found no change
  std::size_t growth_rounds = 0;
  std::vector<std::vector<std::size_t>> waves;
};

RunResult run_to_fixpoint(BehaviorModel model, const Topology& t, std::span<const double> pi,
                          std::span<const double> lambda,
                          std::span<const std::size_t> seeds = {},
                          std::span<const std::uint8_t> empty_override = {});

// Draws lambda[u] i.i.d. uniform [0,1] from the given seed, builds payments
// from the scheme, and runs to fixpoint. Same seed, same result.
RunResult sample_run(BehaviorModel model, const Topology& t, const PaymentScheme& scheme,
                     std::uint64_t seed);

}  // namespace cascade
