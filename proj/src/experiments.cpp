#include "cascade/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"

#include "cascade/rng.hpp"

namespace cascade {

namespace {

// Shortest decimal string that round-trips back to the same double, so that
// CSV/JSON output is byte-stable and lossless.
std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

Topology build_topology(const TopologySpec& spec, double gamma) {
  if (spec.kind == "grid") {
    if (spec.rows == 0 || spec.cols == 0)
      throw std::invalid_argument("grid topology needs rows and cols");
    return derive_quality(grid_latency(spec.rows, spec.cols), gamma);
  }
  if (spec.kind == "file") {
    if (spec.path.empty()) throw std::invalid_argument("file topology needs a path");
    return derive_quality(load_latency_matrix(spec.path), gamma);
  }
  throw std::invalid_argument("unknown topology kind: " + spec.kind);
}

ExperimentRecord run_cell(const Topology& t, BehaviorModel model, const PaymentScheme& scheme,
                          std::size_t replicas, std::uint64_t master_seed, double empty_fraction,
                          std::size_t workers, std::vector<ReplicaMetrics>* dump) {
  const std::size_t n = t.size();
  if (replicas == 0) throw std::invalid_argument("need at least one replica");
  if (!(empty_fraction >= 0.0 && empty_fraction <= 1.0))
    throw std::invalid_argument("empty fraction must lie in [0, 1]");

  const std::vector<double> pi = payments_for(t, scheme);
  const std::size_t k_empty =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(empty_fraction * static_cast<double>(n))));

  std::vector<ReplicaMetrics> rows(replicas);

  auto work = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> ids(n);
    std::vector<std::uint8_t> empty_flags(n);
    std::vector<double> lambda(n);
    for (std::size_t r = lo; r < hi; ++r) {
      Rng rng(mix_seed({master_seed, static_cast<std::uint64_t>(r)}));
      // Starting-inventory draw comes first and the per-node draws second, in
      // node order, so every cell sharing (master_seed, r) sees the same
      // lambdas regardless of its own parameters.
      std::fill(empty_flags.begin(), empty_flags.end(), std::uint8_t{0});
      if (k_empty > 0) {
        std::iota(ids.begin(), ids.end(), std::size_t{0});
        for (std::size_t i = 0; i < k_empty; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
          std::swap(ids[i], ids[j]);
          empty_flags[ids[i]] = 1;
        }
      }
      for (std::size_t u = 0; u < n; ++u) lambda[u] = rng.uniform();

      RunResult run = run_to_fixpoint(model, t, pi, lambda, {}, empty_flags);
      WelfareSummary s = evaluate_all(run.active, t);
      double paid = 0.0;
      for (std::size_t u : run.active_ids) paid += pi[u];
      rows[r] = {s.active_count, s.serviced_count, paid, s.sum_welfare, s.max_welfare};
    }
  };

  std::size_t nworkers = workers;
  if (nworkers == 0) {
    nworkers = std::thread::hardware_concurrency();
    if (nworkers == 0) nworkers = 1;
  }
  nworkers = std::min(nworkers, replicas);
  if (nworkers <= 1) {
    work(0, replicas);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    const std::size_t chunk = (replicas + nworkers - 1) / nworkers;
    for (std::size_t w = 0; w < nworkers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(replicas, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Sequential reduction in replica order; results do not depend on the
  // worker count or scheduling.
  double sum_fa = 0.0, sq_fa = 0.0, sum_fs = 0.0, sq_fs = 0.0;
  double sum_pay = 0.0, sum_ppa = 0.0, sum_pps = 0.0, sum_sw = 0.0, sum_mw = 0.0;
  bool degenerate = false;
  const double dn = static_cast<double>(n);
  for (const ReplicaMetrics& m : rows) {
    const double fa = m.active / dn;
    const double fs = m.serviced / dn;
    sum_fa += fa;
    sq_fa += fa * fa;
    sum_fs += fs;
    sq_fs += fs * fs;
    sum_pay += m.total_payment;
    if (m.active > 0.0) {
      sum_ppa += m.total_payment / m.active;
    } else {
      degenerate = true;
    }
    if (m.serviced > 0.0) {
      sum_pps += m.total_payment / m.serviced;
    } else {
      degenerate = true;
    }
    sum_sw += m.sum_welfare;
    sum_mw += m.max_welfare;
  }
  const double dr = static_cast<double>(replicas);
  auto se = [&](double sum, double sq) {
    if (replicas < 2) return 0.0;
    double var = (sq - sum * sum / dr) / (dr - 1.0);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / dr);
  };

  ExperimentRecord rec;
  rec.gamma = t.gamma();
  rec.model = model;
  rec.alpha = scheme.alpha;
  rec.beta = scheme.beta;
  rec.replicas = replicas;
  rec.frac_active = sum_fa / dr;
  rec.frac_active_se = se(sum_fa, sq_fa);
  rec.frac_serviced = sum_fs / dr;
  rec.frac_serviced_se = se(sum_fs, sq_fs);
  rec.total_payment = sum_pay / dr;
  rec.payment_per_active = sum_ppa / dr;
  rec.payment_per_serviced = sum_pps / dr;
  rec.sum_welfare = sum_sw / dr;
  rec.max_welfare = sum_mw / dr;
  rec.empty_fraction = empty_fraction;
  rec.degenerate = degenerate;

  if (dump != nullptr) *dump = std::move(rows);
  return rec;
}

ExperimentRecord run_cell(const ExperimentConfig& cfg, double alpha, double beta) {
  Topology t = build_topology(cfg.topology, cfg.gamma);
  return run_cell(t, cfg.model, PaymentScheme::degree_power(alpha, beta), cfg.replicas, cfg.seed,
                  cfg.empty_fraction, cfg.workers);
}

std::vector<ExperimentRecord> sweep(const ExperimentConfig& cfg) {
  if (cfg.alphas.empty() || cfg.betas.empty())
    throw std::invalid_argument("sweep needs at least one alpha and one beta");
  Topology t = build_topology(cfg.topology, cfg.gamma);
  std::vector<ExperimentRecord> out;
  out.reserve(cfg.alphas.size() * cfg.betas.size());
  for (double a : cfg.alphas)
    for (double b : cfg.betas)
      out.push_back(run_cell(t, cfg.model, PaymentScheme::degree_power(a, b), cfg.replicas,
                             cfg.seed, cfg.empty_fraction, cfg.workers));
  return out;
}

ModelComparison compare_models(const ExperimentConfig& cfg, std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("model comparison needs alphas");
  const double beta = cfg.betas.empty() ? 1.0 : cfg.betas.front();
  Topology t = build_topology(cfg.topology, cfg.gamma);

  ModelComparison cmp;
  cmp.alphas.assign(alphas.begin(), alphas.end());
  const BehaviorModel order[] = {BehaviorModel::demand, BehaviorModel::one_hop,
                                 BehaviorModel::no_network};
  for (BehaviorModel m : order)
    for (double a : alphas)
      cmp.records.push_back(run_cell(t, m, PaymentScheme::degree_power(a, beta), cfg.replicas,
                                     cfg.seed, cfg.empty_fraction, cfg.workers));
  cmp.active_gap.resize(alphas.size());
  const std::size_t block = alphas.size();
  for (std::size_t i = 0; i < block; ++i)
    cmp.active_gap[i] = cmp.records[i].frac_active - cmp.records[2 * block + i].frac_active;
  return cmp;
}

ThresholdStudy threshold_study(const ExperimentConfig& cfg, std::span<const double> gammas) {
  if (gammas.empty()) throw std::invalid_argument("threshold study needs gammas");
  if (cfg.alphas.empty() || cfg.betas.empty())
    throw std::invalid_argument("threshold study needs at least one alpha and one beta");
  ThresholdStudy study;
  study.gammas.assign(gammas.begin(), gammas.end());
  for (double g : gammas) {
    Topology t = build_topology(cfg.topology, g);
    study.avg_degree.push_back(node_derived(t).avg_degree);
    for (double a : cfg.alphas)
      for (double b : cfg.betas)
        study.records.push_back(run_cell(t, cfg.model, PaymentScheme::degree_power(a, b),
                                         cfg.replicas, cfg.seed, cfg.empty_fraction, cfg.workers));
  }
  return study;
}

void write_csv(std::span<const ExperimentRecord> records, std::ostream& out) {
  out << "gamma,model,alpha,beta,replicas,frac_active,frac_active_se,frac_serviced,"
         "frac_serviced_se,total_payment,payment_per_active,payment_per_serviced,"
         "sum_welfare,max_welfare,empty_fraction,degenerate_flag\n";
  for (const ExperimentRecord& r : records) {
    out << fmt(r.gamma) << ',' << to_string(r.model) << ',' << fmt(r.alpha) << ',' << fmt(r.beta)
        << ',' << r.replicas << ',' << fmt(r.frac_active) << ',' << fmt(r.frac_active_se) << ','
        << fmt(r.frac_serviced) << ',' << fmt(r.frac_serviced_se) << ',' << fmt(r.total_payment)
        << ',' << fmt(r.payment_per_active) << ',' << fmt(r.payment_per_serviced) << ','
        << fmt(r.sum_welfare) << ',' << fmt(r.max_welfare) << ',' << fmt(r.empty_fraction) << ','
        << (r.degenerate ? 1 : 0) << '\n';
  }
}

void write_json(std::span<const ExperimentRecord> records, std::ostream& out) {
  out << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExperimentRecord& r = records[i];
    out << "  {\"gamma\": " << fmt(r.gamma) << ", \"model\": \"" << to_string(r.model)
        << "\", \"alpha\": " << fmt(r.alpha) << ", \"beta\": " << fmt(r.beta)
        << ", \"replicas\": " << r.replicas << ", \"frac_active\": " << fmt(r.frac_active)
        << ", \"frac_active_se\": " << fmt(r.frac_active_se)
        << ", \"frac_serviced\": " << fmt(r.frac_serviced)
        << ", \"frac_serviced_se\": " << fmt(r.frac_serviced_se)
        << ", \"total_payment\": " << fmt(r.total_payment)
        << ", \"payment_per_active\": " << fmt(r.payment_per_active)
        << ", \"payment_per_serviced\": " << fmt(r.payment_per_serviced)
        << ", \"sum_welfare\": " << fmt(r.sum_welfare) << ", \"max_welfare\": " << fmt(r.max_welfare)
        << ", \"empty_fraction\": " << fmt(r.empty_fraction)
        << ", \"degenerate_flag\": " << (r.degenerate ? 1 : 0) << "}" << (i + 1 < records.size() ? "," : "")
        << "\n";
  }
  out << "]\n";
}

void write_records(std::span<const ExperimentRecord> records, const std::string& format,
                   std::ostream& out) {
  if (format == "csv") {
    write_csv(records, out);
  } else if (format == "json") {
    write_json(records, out);
  } else {
    throw std::invalid_argument("unknown output format: " + format);
  }
}

std::vector<ExperimentRecord> records_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("record file must hold an array");
  std::vector<ExperimentRecord> out;
  out.reserve(doc.size());
  for (const auto& item : doc) {
    ExperimentRecord r;
    r.gamma = item.at("gamma").get<double>();
    r.model = parse_model(item.at("model").get<std::string>());
    r.alpha = item.at("alpha").get<double>();
    r.beta = item.at("beta").get<double>();
    r.replicas = item.at("replicas").get<std::size_t>();
    r.frac_active = item.at("frac_active").get<double>();
    r.frac_active_se = item.at("frac_active_se").get<double>();
    r.frac_serviced = item.at("frac_serviced").get<double>();
    r.frac_serviced_se = item.at("frac_serviced_se").get<double>();
    r.total_payment = item.at("total_payment").get<double>();
    r.payment_per_active = item.at("payment_per_active").get<double>();
    r.payment_per_serviced = item.at("payment_per_serviced").get<double>();
    r.sum_welfare = item.at("sum_welfare").get<double>();
    r.max_welfare = item.at("max_welfare").get<double>();
    r.empty_fraction = item.at("empty_fraction").get<double>();
    r.degenerate = item.at("degenerate_flag").get<int>() != 0;
    out.push_back(r);
  }
  return out;
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig cfg;
  if (doc.contains("topology")) {
    const auto& t = doc.at("topology");
    if (t.contains("kind")) cfg.topology.kind = t.at("kind").get<std::string>();
    if (t.contains("rows")) cfg.topology.rows = t.at("rows").get<std::size_t>();
    if (t.contains("cols")) cfg.topology.cols = t.at("cols").get<std::size_t>();
    if (t.contains("path")) cfg.topology.path = t.at("path").get<std::string>();
  }
  if (doc.contains("gamma")) cfg.gamma = doc.at("gamma").get<double>();
  if (doc.contains("model")) cfg.model = parse_model(doc.at("model").get<std::string>());
  if (doc.contains("alphas")) cfg.alphas = doc.at("alphas").get<std::vector<double>>();
  if (doc.contains("betas")) cfg.betas = doc.at("betas").get<std::vector<double>>();
  if (doc.contains("replicas")) cfg.replicas = doc.at("replicas").get<std::size_t>();
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("empty_fraction")) cfg.empty_fraction = doc.at("empty_fraction").get<double>();
  if (doc.contains("welfare")) {
    cfg.welfare.clear();
    for (const auto& w : doc.at("welfare")) cfg.welfare.push_back(parse_welfare(w.get<std::string>()));
  }
  if (doc.contains("workers")) cfg.workers = doc.at("workers").get<std::size_t>();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["topology"] = {{"kind", cfg.topology.kind},
                     {"rows", cfg.topology.rows},
                     {"cols", cfg.topology.cols},
                     {"path", cfg.topology.path}};
  doc["gamma"] = cfg.gamma;
  doc["model"] = to_string(cfg.model);
  doc["alphas"] = cfg.alphas;
  doc["betas"] = cfg.betas;
  doc["replicas"] = cfg.replicas;
  doc["seed"] = cfg.seed;
  doc["empty_fraction"] = cfg.empty_fraction;
  std::vector<std::string> names;
  for (WelfareFunction w : cfg.welfare) names.push_back(to_string(w));
  doc["welfare"] = names;
  doc["workers"] = cfg.workers;
  return doc.dump(2) + "\n";
}

}  // namespace cascade
