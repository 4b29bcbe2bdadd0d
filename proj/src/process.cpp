#include "cascade/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cascade/kernels.hpp"
#include "cascade/rng.hpp"

namespace cascade {

std::string to_string(BehaviorModel model) {
  switch (model) {
    case BehaviorModel::demand: return "demand";
    case BehaviorModel::one_hop: return "onehop";
    case BehaviorModel::no_network: return "nonetwork";
  }
  return "?";
}

BehaviorModel parse_model(std::string_view name) {
  if (name == "demand") return BehaviorModel::demand;
  if (name == "onehop") return BehaviorModel::one_hop;
  if (name == "nonetwork") return BehaviorModel::no_network;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "', expected demand|onehop|nonetwork");
}

PaymentScheme PaymentScheme::degree_power(double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("alpha and beta must be >= 0");
  PaymentScheme s;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

PaymentScheme PaymentScheme::explicit_offers(std::vector<double> pi) {
  for (double x : pi)
    if (!(x >= 0.0)) throw std::invalid_argument("payments must be >= 0");
  PaymentScheme s;
  s.offers = std::move(pi);
  return s;
}

std::vector<double> payments_for(const Topology& t, const PaymentScheme& scheme) {
  const std::size_t n = t.size();
  if (!scheme.offers.empty()) {
    if (scheme.offers.size() != n) throw std::invalid_argument("payment vector length mismatch");
    return scheme.offers;
  }
  std::vector<double> pi(n);
  for (std::size_t u = 0; u < n; ++u) {
    const double deg = static_cast<double>(t.degree(u));
    pi[u] = (deg == 0.0 && scheme.beta == 0.0) ? scheme.alpha
                                               : scheme.alpha * std::pow(deg, scheme.beta);
  }
  return pi;
}

SharingState make_state(const Topology& t, std::span<const double> pi,
                        std::span<const double> lambda, std::span<const std::size_t> seeds,
                        std::span<const std::uint8_t> empty_override) {
  const std::size_t n = t.size();
  if (pi.size() != n || lambda.size() != n)
    throw std::invalid_argument("payment and tradeoff vectors must have one entry per node");
  for (double l : lambda)
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("tradeoff draws must lie in [0,1]");

  SharingState st;
  st.active.assign(n, 0);
  st.lambda.assign(lambda.begin(), lambda.end());
  st.pay.resize(n);
  for (std::size_t u = 0; u < n; ++u) st.pay[u] = lambda[u] * pi[u];
  if (empty_override.empty()) {
    st.empty = t.empty();
  } else {
    if (empty_override.size() != n) throw std::invalid_argument("empty flag vector length mismatch");
    st.empty.assign(empty_override.begin(), empty_override.end());
  }
  st.denom.assign(n, 0.0);
  st.act.assign(n, 0.0);
  for (std::size_t s : seeds) {
    if (s >= n) throw std::invalid_argument("seed id out of range");
    if (st.empty[s]) throw std::invalid_argument("an empty node cannot be seeded");
    if (st.active[s]) continue;
    st.active[s] = 1;
    st.act[s] = 1.0;
    kern::accumulate(st.denom.data(), t.incoming(s), n);
  }
  return st;
}

namespace {

double engine_cost(BehaviorModel model, const Topology& t, const SharingState& st, std::size_t u) {
  const std::size_t n = t.size();
  const double* dem = t.demand().data();
  const double* col = t.incoming(u);
  switch (model) {
    case BehaviorModel::no_network:
      return t.cost()[u] * kern::dot(dem, col, n);
    case BehaviorModel::demand:
      return t.cost()[u] * kern::shared_load_joining(dem, col, st.denom.data(), n);
    case BehaviorModel::one_hop: {
      double acc = kern::pairwise_load(dem, col, t.diagonal(), st.act.data(), n);
      // The u-term of the pairwise sum assumed a pair denominator; replace it
      // with u's own shared denominator.
      const double self_num = dem[u] * col[u];
      if (self_num > 0.0) {
        acc -= self_num / (col[u] + st.act[u] * t.diagonal()[u]);
        acc += self_num / (st.denom[u] + col[u]);
      }
      return t.cost()[u] * acc;
    }
  }
  return 0.0;
}

}  // namespace

double perceived_cost(BehaviorModel model, const Topology& t,
                      std::span<const std::uint8_t> active, std::size_t u) {
  const std::size_t n = t.size();
  if (active.size() != n) throw std::invalid_argument("active flag vector length mismatch");
  if (u >= n) throw std::invalid_argument("node id out of range");
  const auto& d = t.demand();
  double acc = 0.0;
  switch (model) {
    case BehaviorModel::no_network:
      for (std::size_t v = 0; v < n; ++v) acc += d[v] * t.quality(v, u);
      break;
    case BehaviorModel::demand:
      for (std::size_t v = 0; v < n; ++v) {
        const double num = d[v] * t.quality(v, u);
        if (num <= 0.0) continue;
        double den = t.quality(v, u);
        for (std::size_t w = 0; w < n; ++w)
          if (w != u && active[w]) den += t.quality(v, w);
        acc += num / den;
      }
      break;
    case BehaviorModel::one_hop:
      for (std::size_t v = 0; v < n; ++v) {
        const double num = d[v] * t.quality(v, u);
        if (num <= 0.0) continue;
        double den;
        if (v == u) {
          den = t.quality(u, u);
          for (std::size_t w = 0; w < n; ++w)
            if (w != u && active[w]) den += t.quality(u, w);
        } else {
          den = t.quality(v, u) + (active[v] ? t.quality(v, v) : 0.0);
        }
        acc += num / den;
      }
      break;
  }
  return t.cost()[u] * acc;
}

double perceived_utility(BehaviorModel model, const Topology& t,
                         std::span<const std::uint8_t> active, std::size_t u, double pay_u) {
  return pay_u - perceived_cost(model, t, active, u);
}

std::vector<std::size_t> step(BehaviorModel model, const Topology& t, SharingState& state) {
  const std::size_t n = t.size();
  std::vector<std::size_t> fresh;
  for (std::size_t u = 0; u < n; ++u) {
    if (state.active[u] || state.empty[u]) continue;
    if (state.pay[u] - engine_cost(model, t, state, u) > 0.0) fresh.push_back(u);
  }
  for (std::size_t u : fresh) {
    state.active[u] = 1;
    state.act[u] = 1.0;
    kern::accumulate(state.denom.data(), t.incoming(u), n);
  }
  state.round += 1;
  if (!fresh.empty()) state.waves.push_back(fresh);
  return fresh;
}

RunResult run_to_fixpoint(BehaviorModel model, const Topology& t, std::span<const double> pi,
                          std::span<const double> lambda, std::span<const std::size_t> seeds,
                          std::span<const std::uint8_t> empty_override) {
  SharingState st = make_state(t, pi, lambda, seeds, empty_override);
  while (!step(model, t, st).empty()) {
  }
  RunResult out;
  out.active = std::move(st.active);
  for (std::size_t u = 0; u < out.active.size(); ++u)
    if (out.active[u]) out.active_ids.push_back(u);
  out.rounds = st.round;
  out.growth_rounds = st.waves.size();
  out.waves = std::move(st.waves);
  return out;
}

RunResult sample_run(BehaviorModel model, const Topology& t, const PaymentScheme& scheme,
                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> lambda(t.size());
  for (double& l : lambda) l = rng.uniform();
  const std::vector<double> pi = payments_for(t, scheme);
  return run_to_fixpoint(model, t, pi, lambda);
}

}  // namespace cascade
