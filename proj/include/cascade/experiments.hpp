#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cascade/process.hpp"
#include "cascade/topology.hpp"
#include "cascade/welfare.hpp"

namespace cascade {

struct TopologySpec {
  std::string kind = "grid";  // grid | file
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string path;
};

Topology build_topology(const TopologySpec& spec, double gamma);

struct ExperimentConfig {
  TopologySpec topology;
  double gamma = 2.0;
  BehaviorModel model = BehaviorModel::demand;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::size_t replicas = 1000;
  std::uint64_t seed = 0;
  double empty_fraction = 0.0;
  std::vector<WelfareFunction> welfare;  // reported selection; records carry all metrics
  std::size_t workers = 0;               // 0 = hardware parallelism
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

// One sweep cell, aggregated over replicas. Fields match the CSV contract.
struct ExperimentRecord {
  double gamma = 0.0;
  BehaviorModel model = BehaviorModel::demand;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t replicas = 0;
  double frac_active = 0.0;
  double frac_active_se = 0.0;
  double frac_serviced = 0.0;
  double frac_serviced_se = 0.0;
  double total_payment = 0.0;
  double payment_per_active = 0.0;
  double payment_per_serviced = 0.0;
  double sum_welfare = 0.0;
  double max_welfare = 0.0;
  double empty_fraction = 0.0;
  bool degenerate = false;  // some replica had nothing active or serviced

  bool operator==(const ExperimentRecord&) const = default;
};

// Raw per-replica outcomes, for paired statistics across coupled cells.
struct ReplicaMetrics {
  double active = 0.0;
  double serviced = 0.0;
  double total_payment = 0.0;
  double sum_welfare = 0.0;
  double max_welfare = 0.0;
};

// Replica r of every cell draws from a generator seeded by (master seed, r)
// alone, so cells, models, and thresholds share their randomness: paired
// comparisons across cells are exact.
ExperimentRecord run_cell(const Topology& t, BehaviorModel model, const PaymentScheme& scheme,
                          std::size_t replicas, std::uint64_t master_seed, double empty_fraction,
                          std::size_t workers = 0, std::vector<ReplicaMetrics>* dump = nullptr);

ExperimentRecord run_cell(const ExperimentConfig& cfg, double alpha, double beta);

// Full alpha x beta grid, alpha-major order.
std::vector<ExperimentRecord> sweep(const ExperimentConfig& cfg);

struct ModelComparison {
  std::vector<double> alphas;
  std::vector<ExperimentRecord> records;  // demand block, then onehop, then nonetwork
  std::vector<double> active_gap;         // demand minus nonetwork active fraction, per alpha
};

ModelComparison compare_models(const ExperimentConfig& cfg, std::span<const double> alphas);

struct ThresholdStudy {
  std::vector<double> gammas;
  std::vector<double> avg_degree;
  std::vector<ExperimentRecord> records;  // gamma-major, then the alpha x beta grid
};

ThresholdStudy threshold_study(const ExperimentConfig& cfg, std::span<const double> gammas);

void write_csv(std::span<const ExperimentRecord> records, std::ostream& out);
void write_json(std::span<const ExperimentRecord> records, std::ostream& out);
void write_records(std::span<const ExperimentRecord> records, const std::string& format,
                   std::ostream& out);
std::vector<ExperimentRecord> records_from_json(const std::string& text);

}  // namespace cascade
