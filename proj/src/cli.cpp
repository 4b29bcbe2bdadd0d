#include "cascade/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "cascade/coverage.hpp"
#include "cascade/experiments.hpp"
#include "cascade/process.hpp"
#include "cascade/seedset.hpp"
#include "cascade/topology.hpp"
#include "cascade/welfare.hpp"

namespace cascade {

namespace {

// Bad input (unknown values, missing files, malformed config) exits 2;
// anything thrown past it exits 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("no such file: " + path);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags shared by the experiment-style subcommands; option pointers let the
// merge step apply only the flags that were actually given.
struct CommonFlags {
  std::string config_path;
  std::string topology_kind;
  std::string latency_path;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double gamma = 0.0;
  std::string model_name;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  double empty_fraction = 0.0;
  std::vector<std::string> welfare_names;
  std::string out_path;
  std::string format = "csv";
  std::size_t workers = 0;

  CLI::Option* o_topology = nullptr;
  CLI::Option* o_latency = nullptr;
  CLI::Option* o_rows = nullptr;
  CLI::Option* o_cols = nullptr;
  CLI::Option* o_gamma = nullptr;
  CLI::Option* o_model = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_replicas = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_empty = nullptr;
  CLI::Option* o_welfare = nullptr;
  CLI::Option* o_workers = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  f.o_topology = cmd->add_option("--topology", f.topology_kind, "Topology source")
                     ->check(CLI::IsMember({"file", "grid"}));
  f.o_latency = cmd->add_option("--latency", f.latency_path, "Latency matrix file");
  f.o_rows = cmd->add_option("--rows", f.rows, "Grid rows");
  f.o_cols = cmd->add_option("--cols", f.cols, "Grid cols");
  f.o_gamma = cmd->add_option("--gamma", f.gamma, "Latency tolerance threshold");
  f.o_model = cmd->add_option("--model", f.model_name, "Behavior model")
                  ->check(CLI::IsMember({"demand", "onehop", "nonetwork"}));
  f.o_alpha = cmd->add_option("--alpha", f.alphas, "Payment scale values")->delimiter(',');
  f.o_beta = cmd->add_option("--beta", f.betas, "Payment degree exponents")->delimiter(',');
  f.o_replicas = cmd->add_option("--replicas", f.replicas, "Replicas per cell");
  f.o_seed = cmd->add_option("--seed", f.seed, "Master seed (default 0)");
  f.o_empty = cmd->add_option("--empty-fraction", f.empty_fraction,
                              "Fraction of nodes without the file");
  f.o_welfare = cmd->add_option("--welfare", f.welfare_names, "Welfare functions to report")
                    ->delimiter(',');
  cmd->add_option("--out", f.out_path, "Output file (stdout when omitted)");
  cmd->add_option("--format", f.format, "Record format")->check(CLI::IsMember({"csv", "json"}));
  f.o_workers = cmd->add_option("--workers", f.workers, "Worker threads (0 = hardware)");
}

ExperimentConfig merge_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    try {
      cfg = config_from_json(read_file(f.config_path));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad config: ") + e.what());
    }
  }
  if (f.o_topology->count()) cfg.topology.kind = f.topology_kind;
  if (f.o_latency->count()) {
    cfg.topology.path = f.latency_path;
    if (!f.o_topology->count()) cfg.topology.kind = "file";
  }
  if (f.o_rows->count()) cfg.topology.rows = f.rows;
  if (f.o_cols->count()) cfg.topology.cols = f.cols;
  if (f.o_gamma->count()) cfg.gamma = f.gamma;
  if (f.o_model->count()) cfg.model = parse_model(f.model_name);
  if (f.o_alpha->count()) cfg.alphas = f.alphas;
  if (f.o_beta->count()) cfg.betas = f.betas;
  if (f.o_replicas->count()) cfg.replicas = f.replicas;
  if (f.o_seed->count()) cfg.seed = f.seed;
  if (f.o_empty->count()) cfg.empty_fraction = f.empty_fraction;
  if (f.o_welfare->count()) {
    cfg.welfare.clear();
    for (const std::string& w : f.welfare_names) cfg.welfare.push_back(parse_welfare(w));
  }
  if (f.o_workers->count()) cfg.workers = f.workers;
  if (cfg.topology.kind == "file" && !cfg.topology.path.empty() &&
      !std::filesystem::exists(cfg.topology.path))
    throw UsageError("no such file: " + cfg.topology.path);
  return cfg;
}

// Runs fn against --out or stdout and makes sure the bytes landed.
void with_output(const std::string& out_path, const std::function<void(std::ostream&)>& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

void write_id_list(std::ostream& out, std::span<const std::size_t> ids) {
  out << '[';
  for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? ", " : "") << ids[i];
  out << ']';
}

void write_waves(std::ostream& out, const std::vector<std::vector<std::size_t>>& waves) {
  out << '[';
  for (std::size_t i = 0; i < waves.size(); ++i) {
    if (i) out << ", ";
    write_id_list(out, waves[i]);
  }
  out << ']';
}

int cmd_simulate(const CommonFlags& f) {
  ExperimentConfig cfg = merge_config(f);
  if (cfg.alphas.empty()) throw UsageError("simulate needs --alpha (or alphas in the config)");
  const double alpha = cfg.alphas.front();
  const double beta = cfg.betas.empty() ? 1.0 : cfg.betas.front();
  Topology t = build_topology(cfg.topology, cfg.gamma);
  RunResult run = sample_run(cfg.model, t, PaymentScheme::degree_power(alpha, beta), cfg.seed);
  WelfareSummary s = evaluate_all(run.active, t);
  with_output(f.out_path, [&](std::ostream& out) {
    out << "{\"n\": " << t.size() << ", \"gamma\": " << fmt(t.gamma()) << ", \"model\": \""
        << to_string(cfg.model) << "\", \"alpha\": " << fmt(alpha) << ", \"beta\": " << fmt(beta)
        << ", \"seed\": " << cfg.seed << ",\n \"active_count\": " << s.active_count
        << ", \"serviced_count\": " << s.serviced_count
        << ", \"sum_welfare\": " << fmt(s.sum_welfare)
        << ", \"max_welfare\": " << fmt(s.max_welfare) << ", \"rounds\": " << run.rounds
        << ", \"growth_rounds\": " << run.growth_rounds << ",\n \"active\": ";
    write_id_list(out, run.active_ids);
    out << ", \"waves\": ";
    write_waves(out, run.waves);
    out << "}\n";
  });
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  ExperimentConfig cfg = merge_config(f);
  std::vector<ExperimentRecord> records = sweep(cfg);
  with_output(f.out_path, [&](std::ostream& out) { write_records(records, f.format, out); });
  return 0;
}

int cmd_compare(const CommonFlags& f) {
  ExperimentConfig cfg = merge_config(f);
  if (cfg.alphas.empty()) throw UsageError("compare-models needs --alpha (or alphas in the config)");
  ModelComparison cmp = compare_models(cfg, cfg.alphas);
  for (std::size_t i = 0; i < cmp.alphas.size(); ++i)
    std::cout << "alpha=" << fmt(cmp.alphas[i]) << " gap=" << fmt(cmp.active_gap[i]) << "\n";
  std::cout.flush();
  if (!f.out_path.empty())
    with_output(f.out_path, [&](std::ostream& out) { write_records(cmp.records, f.format, out); });
  return 0;
}

int cmd_threshold(const CommonFlags& f, const std::vector<double>& gammas) {
  ExperimentConfig cfg = merge_config(f);
  if (gammas.empty()) throw UsageError("threshold-study needs --gammas");
  ThresholdStudy study = threshold_study(cfg, gammas);
  for (std::size_t i = 0; i < study.gammas.size(); ++i)
    std::cout << "gamma=" << fmt(study.gammas[i]) << " avg_degree=" << fmt(study.avg_degree[i])
              << "\n";
  std::cout.flush();
  if (!f.out_path.empty())
    with_output(f.out_path, [&](std::ostream& out) { write_records(study.records, f.format, out); });
  return 0;
}

int cmd_coverage_check(const CommonFlags& f) {
  ExperimentConfig cfg = merge_config(f);
  Topology t = build_topology(cfg.topology, cfg.gamma);
  bool all_pass = true;
  for (std::size_t u = 0; u < t.size(); ++u) {
    try {
      SeedActivation act = activation_function(t, u);
      CoverageCheck check = check_coverage_conditions(act.f);
      if (check.pass) {
        std::cout << "node " << u << ": pass\n";
      } else {
        all_pass = false;
        std::cout << "node " << u << ": FAIL (" << check.violations.size()
                  << " violations, worst " << fmt(check.worst) << ")\n";
      }
    } catch (const std::exception& e) {
      all_pass = false;
      std::cout << "node " << u << ": FAIL (" << e.what() << ")\n";
    }
  }
  std::cout.flush();
  return all_pass ? 0 : 1;
}

int cmd_greedy(const CommonFlags& f, std::size_t k, std::size_t samples, bool exact) {
  ExperimentConfig cfg = merge_config(f);
  if (k == 0) throw UsageError("greedy needs --k >= 1");
  Topology t = build_topology(cfg.topology, cfg.gamma);
  WelfareFunction w = cfg.welfare.empty() ? WelfareFunction::active_count : cfg.welfare.front();
  GreedyOptions opts;
  opts.samples = samples;
  opts.seed = cfg.seed;
  opts.exact = exact;
  GreedyResult res = greedy_seed(t, k, w, opts);
  with_output(f.out_path, [&](std::ostream& out) {
    out << "{\"welfare\": \"" << to_string(w) << "\", \"k\": " << k
        << ", \"exact\": " << (exact ? "true" : "false") << ", \"samples\": " << samples
        << ", \"seed\": " << cfg.seed << ",\n \"picks\": ";
    write_id_list(out, res.picks);
    out << ", \"gains\": [";
    for (std::size_t i = 0; i < res.gains.size(); ++i) out << (i ? ", " : "") << fmt(res.gains[i]);
    out << "], \"value\": " << fmt(res.value) << "}\n";
  });
  return 0;
}

std::vector<std::pair<std::size_t, std::size_t>> read_edge_list(const std::string& path,
                                                               std::size_t& vertices) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  vertices = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::size_t a = 0, b = 0;
    if (!(ls >> a)) continue;  // blank or comment-only line
    if (!(ls >> b))
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected \"u v\"");
    edges.emplace_back(a, b);
    vertices = std::max({vertices, a + 1, b + 1});
  }
  if (edges.empty()) throw UsageError(path + ": no edges");
  return edges;
}

int cmd_gadget(const std::string& graph_path, std::size_t r,
               const std::vector<std::size_t>& seed_nodes, const std::string& out_path) {
  std::size_t vertices = 0;
  auto edges = read_edge_list(graph_path, vertices);
  GadgetInstance g = vertex_cover_gadget(edges, vertices, r);
  RunResult run = run_gadget(g, seed_nodes);

  std::size_t by_layer[4] = {0, 0, 0, 0};
  for (std::size_t u : run.active_ids) {
    if (u < g.primary_begin()) ++by_layer[0];
    else if (u < g.secondary_begin()) ++by_layer[1];
    else if (u < g.bulk_begin()) ++by_layer[2];
    else ++by_layer[3];
  }

  with_output(out_path, [&](std::ostream& out) {
    out << "{\"vertices\": " << g.vertices << ", \"edges\": " << g.edges << ", \"r\": " << g.r
        << ", \"total\": " << g.total()
        << ",\n \"layers\": {\"node\": " << g.vertices << ", \"primary\": " << g.edges
        << ", \"secondary\": " << g.edges << ", \"bulk\": " << g.bulk << "},\n \"seeds\": ";
    write_id_list(out, seed_nodes);
    out << ", \"rounds\": " << run.rounds << ", \"growth_rounds\": " << run.growth_rounds
        << ", \"final_count\": " << run.active_ids.size()
        << ",\n \"active_by_layer\": {\"node\": " << by_layer[0]
        << ", \"primary\": " << by_layer[1] << ", \"secondary\": " << by_layer[2]
        << ", \"bulk\": " << by_layer[3] << "},\n \"waves\": ";
    write_waves(out, run.waves);
    out << "}\n";
  });
  return 0;
}

int cmd_inspect(const CommonFlags& f) {
  ExperimentConfig cfg = merge_config(f);
  Topology t = build_topology(cfg.topology, cfg.gamma);
  NodeDerived d = node_derived(t);
  double c_min = 0.0, c_max = 0.0, c_sum = 0.0;
  std::size_t deg_min = 0, deg_max = 0;
  for (std::size_t u = 0; u < t.size(); ++u) {
    const double c = d.c_total[u];
    const std::size_t deg = d.degree[u];
    if (u == 0) {
      c_min = c_max = c;
      deg_min = deg_max = deg;
    } else {
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
      deg_min = std::min(deg_min, deg);
      deg_max = std::max(deg_max, deg);
    }
    c_sum += c;
  }
  const double n = static_cast<double>(t.size());
  std::cout << "n=" << t.size() << "\n"
            << "gamma=" << fmt(t.gamma()) << "\n"
            << "avg_degree=" << fmt(d.avg_degree) << "\n"
            << "degree_min=" << deg_min << "\n"
            << "degree_max=" << deg_max << "\n"
            << "c_total_min=" << fmt(c_min) << "\n"
            << "c_total_mean=" << fmt(t.size() ? c_sum / n : 0.0) << "\n"
            << "c_total_max=" << fmt(c_max) << "\n";
  std::cout.flush();
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Incentive-driven sharing cascades: simulation, sweeps, and structure checks"};
  app.require_subcommand(1);

  CommonFlags sim_f, sweep_f, cmp_f, thr_f, cov_f, greedy_f, inspect_f;
  std::vector<double> gammas;
  std::size_t greedy_k = 0, greedy_samples = 2000;
  bool greedy_exact = false;
  std::string gadget_graph;
  std::size_t gadget_r = 1;
  std::vector<std::size_t> gadget_seeds;
  std::string gadget_out;

  CLI::App* c_sim = app.add_subcommand("simulate", "One seeded run, JSON result");
  add_common(c_sim, sim_f);
  CLI::App* c_sweep = app.add_subcommand("sweep", "Alpha x beta grid of cells");
  add_common(c_sweep, sweep_f);
  CLI::App* c_cmp = app.add_subcommand("compare-models", "Same sweep under all three models");
  add_common(c_cmp, cmp_f);
  CLI::App* c_thr = app.add_subcommand("threshold-study", "Sweep across latency thresholds");
  add_common(c_thr, thr_f);
  c_thr->add_option("--gammas", gammas, "Thresholds to study")->delimiter(',')->required();
  CLI::App* c_cov = app.add_subcommand("coverage-check", "Per-node coverage conditions");
  add_common(c_cov, cov_f);
  CLI::App* c_greedy = app.add_subcommand("greedy", "Greedy seed selection");
  add_common(c_greedy, greedy_f);
  c_greedy->add_option("--k", greedy_k, "Seed set size")->required();
  c_greedy->add_option("--samples", greedy_samples, "Replicas per candidate estimate");
  c_greedy->add_flag("--exact", greedy_exact, "Exact expectations instead of sampling");
  CLI::App* c_gadget = app.add_subcommand("gadget", "Layered reduction instance from an edge list");
  c_gadget->add_option("--graph", gadget_graph, "Edge list file, lines \"u v\", 0-based")
      ->required();
  c_gadget->add_option("--r", gadget_r, "Bulk layer exponent")->required();
  c_gadget->add_option("--seed-nodes", gadget_seeds, "Seed vertex ids")
      ->delimiter(',')
      ->required();
  c_gadget->add_option("--out", gadget_out, "Trace file (stdout when omitted)");
  CLI::App* c_inspect = app.add_subcommand("inspect", "Topology summary");
  add_common(c_inspect, inspect_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim_f);
    if (c_sweep->parsed()) return cmd_sweep(sweep_f);
    if (c_cmp->parsed()) return cmd_compare(cmp_f);
    if (c_thr->parsed()) return cmd_threshold(thr_f, gammas);
    if (c_cov->parsed()) return cmd_coverage_check(cov_f);
    if (c_greedy->parsed()) return cmd_greedy(greedy_f, greedy_k, greedy_samples, greedy_exact);
    if (c_gadget->parsed()) return cmd_gadget(gadget_graph, gadget_r, gadget_seeds, gadget_out);
    if (c_inspect->parsed()) return cmd_inspect(inspect_f);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cascade
