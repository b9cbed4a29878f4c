// hypforge: model checking, hypothesis generation, PDDL export, benchmarks
// and the IDE service from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hypforge/bench.hpp"
#include "hypforge/graph.hpp"
#include "hypforge/lint.hpp"
#include "hypforge/oracle.hpp"
#include "hypforge/parser.hpp"
#include "hypforge/pddl.hpp"
#include "hypforge/search.hpp"
#include "hypforge/service.hpp"

using namespace hypforge;

namespace {

// "60s", "500ms", "2m" or a bare number of seconds.
Seconds parse_duration(const std::string& text) {
  std::size_t used = 0;
  double v = std::stod(text, &used);
  const std::string unit = text.substr(used);
  if (unit.empty() || unit == "s") return Seconds(v);
  if (unit == "ms") return Seconds(v / 1000.0);
  if (unit == "m" || unit == "min") return Seconds(v * 60.0);
  throw std::invalid_argument("bad duration '" + text + "'");
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoul(item));
  }
  return out;
}

// Parses, prints diagnostics to stderr, and exits on errors.
ModelSpec load_model(const std::string& path) {
  ParseResult pr = parse_file(path);
  for (const auto& d : pr.diagnostics) std::cerr << format_diagnostic(d, path) << "\n";
  if (!pr.ok()) std::exit(1);
  return std::move(*pr.model);
}

Trace load_trace(const std::string& path) { return parse_trace_text(read_text_file(path)); }

struct CostFlags {
  Cost discard = 100;
  Cost good = 1;
  Cost bad = 10;
  Cost unobserved = 5;

  void add(CLI::App* app) {
    app->add_option("--discard-cost", discard, "Cost of leaving an observation unexplained");
    app->add_option("--good-cost", good, "Cost of entering a good state");
    app->add_option("--bad-cost", bad, "Cost of entering a bad state");
    app->add_option("--unobserved-cost", unobserved, "Surcharge per unobserved step");
  }
  CostParams params() const { return CostParams::make(discard, good, bad, unobserved); }
};

int cmd_parse(const std::string& path) {
  ParseResult pr = parse_file(path);
  auto ds = pr.diagnostics;
  if (pr.ok()) {
    auto w = lint(*pr.model);
    ds.insert(ds.end(), w.begin(), w.end());
  }
  sort_by_span(ds);
  for (const auto& d : ds) std::cout << format_diagnostic(d, path) << "\n";
  if (!pr.ok()) return 1;
  std::size_t hypers = 0;
  for (const auto& h : pr.model->hyperstates) hypers += h.singleton ? 0 : 1;
  std::cout << pr.model->name << ": " << pr.model->state_count() << " states, " << hypers << " hyperstates, "
            << pr.model->observation_vocab().size() << " observation symbols\n";
  return 0;
}

int cmd_graph(const std::string& path) {
  const ModelSpec m = load_model(path);
  const GraphDoc g = render_graph(m);
  std::cout << "digraph \"" << m.name << "\" {\n";
  std::optional<std::string> open_cluster;
  for (const auto& n : g.nodes) {
    if (n.node_class == NodeClass::hyper) {
      if (open_cluster) std::cout << "  }\n";
      std::cout << "  subgraph \"cluster_" << n.id << "\" {\n    label=\"" << n.id << "\";\n";
      open_cluster = n.id;
      continue;
    }
    if (open_cluster && n.parent != open_cluster) {
      std::cout << "  }\n";
      open_cluster.reset();
    }
    std::string label = n.id;
    for (const auto& o : n.observations) label += "\\n" + o;
    std::cout << (open_cluster ? "    " : "  ") << "\"" << n.id << "\" [label=\"" << label << "\" color=\""
              << (n.node_class == NodeClass::bad ? "red" : "blue") << "\"" << (n.start ? " peripheries=2" : "")
              << "];\n";
  }
  if (open_cluster) std::cout << "  }\n";
  for (const auto& e : g.edges) std::cout << "  \"" << e.from << "\" -> \"" << e.to << "\";\n";
  std::cout << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypothesis generation over LTS++ models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  std::string model_path, trace_path;

  auto* parse_cmd = app.add_subcommand("parse", "Check a model and print diagnostics");
  parse_cmd->add_option("model", model_path, "LTS++ file")->required()->check(CLI::ExistingFile);
  auto* lint_cmd = app.add_subcommand("lint", "Same as parse");
  lint_cmd->add_option("model", model_path, "LTS++ file")->required()->check(CLI::ExistingFile);

  auto* graph_cmd = app.add_subcommand("graph", "Print the transition graph as Graphviz dot");
  graph_cmd->add_option("model", model_path, "LTS++ file")->required()->check(CLI::ExistingFile);

  std::size_t k = 10;
  std::string budget = "60s";
  bool use_oracle = false;
  std::optional<std::size_t> max_chain;
  CostFlags costs;
  auto* solve_cmd = app.add_subcommand("solve", "Rank the most plausible hypotheses for a trace");
  solve_cmd->add_option("model", model_path, "LTS++ file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("trace", trace_path, "Trace file, one observation per line")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--k", k, "Number of hypotheses")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--budget", budget, "Time budget, e.g. 60s");
  solve_cmd->add_option("--max-chain", max_chain, "Longest run of unobserved steps");
  solve_cmd->add_flag("--oracle", use_oracle, "Use the exact enumerator instead of the search engine");
  costs.add(solve_cmd);

  std::string out_dir = ".";
  auto* pddl_cmd = app.add_subcommand("export-pddl", "Write the planning problem as PDDL");
  pddl_cmd->add_option("model", model_path, "LTS++ file")->required()->check(CLI::ExistingFile);
  pddl_cmd->add_option("trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);
  pddl_cmd->add_option("--out-dir", out_dir, "Output directory");
  pddl_cmd->add_option("--max-chain", max_chain, "Longest run of unobserved steps");
  costs.add(pddl_cmd);

  BenchConfig bench;
  std::string states = "10,50,100", obs = "5,10,20,40,60,80,100,120", bench_budget = "60s", report_path;
  auto* bench_cmd = app.add_subcommand("bench", "Ground-truth recovery on random models");
  bench_cmd->add_option("--states", states, "Comma-separated state counts");
  bench_cmd->add_option("--obs", obs, "Comma-separated observation counts");
  bench_cmd->add_option("--instances", bench.instances_per_cell, "Instances per cell");
  bench_cmd->add_option("--seed", bench.seed, "Run seed");
  bench_cmd->add_option("--budget", bench_budget, "Time budget per instance");
  bench_cmd->add_option("--k", bench.k, "Hypotheses per instance")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bench.workers, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--bad-fraction", bench.bad_fraction, "Fraction of bad states");
  bench_cmd->add_option("--p-missing", bench.noise.p_missing, "Probability an observation is dropped");
  bench_cmd->add_option("--p-inconsistent", bench.noise.p_inconsistent, "Probability an observation is replaced");
  bench_cmd->add_option("--out", report_path, "JSON report path");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store;
  if (const char* p = std::getenv("HYPFORGE_PORT")) port = std::atoi(p);
  if (const char* s = std::getenv("HYPFORGE_STORE")) store = s;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service for the IDE");
  serve_cmd->add_option("--host", host, "Listen address");
  serve_cmd->add_option("--port", port, "Port (env HYPFORGE_PORT)");
  serve_cmd->add_option("--store", store, "Model store file (env HYPFORGE_STORE)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse_cmd || *lint_cmd) return cmd_parse(model_path);
    if (*graph_cmd) return cmd_graph(model_path);

    if (*solve_cmd) {
      const ModelSpec model = load_model(model_path);
      const Trace trace = load_trace(trace_path);
      for (const auto& d : lint_trace(model, trace)) std::cerr << format_diagnostic(d, trace_path) << "\n";
      const PlanningProblem problem = compile(model, trace, costs.params(), {max_chain});
      ResultSet rs;
      if (use_oracle) {
        rs = exact_oracle(problem, k);
      } else {
        SearchConfig sc;
        sc.k = k;
        sc.time_budget = parse_duration(budget);
        rs = find_top_k(problem, sc);
      }
      for (const auto& h : rs.hypotheses) {
        std::cout << "#" << h.rank << "  cost " << h.total_cost << "  " << to_string(h, trace) << "\n";
      }
      std::cout << rs.hypotheses.size() << " hypotheses" << (rs.exhausted ? " (all there are)" : "") << " in "
                << rs.elapsed.count() << "s\n";
      return 0;
    }

    if (*pddl_cmd) {
      const ModelSpec model = load_model(model_path);
      const Trace trace = load_trace(trace_path);
      const PlanningProblem problem = compile(model, trace, costs.params(), {max_chain});
      const std::string trace_id = std::filesystem::path(trace_path).stem().string();
      const PddlFiles files = export_pddl(problem, trace_id);
      const auto dir = std::filesystem::path(out_dir);
      std::filesystem::create_directories(dir);
      const auto dom = dir / (model.name + "-domain.pddl");
      const auto prob = dir / (model.name + "-" + trace_id + "-problem.pddl");
      std::ofstream(dom) << files.domain;
      std::ofstream(prob) << files.problem;
      std::cout << dom.string() << "\n" << prob.string() << "\n";
      return 0;
    }

    if (*bench_cmd) {
      bench.state_counts = parse_list(states);
      bench.obs_counts = parse_list(obs);
      bench.time_budget = parse_duration(bench_budget);
      const BenchReport report = run_benchmark(bench, [](const InstanceResult& r) {
        std::cerr << "states " << r.states << " obs " << r.observations << " #" << r.instance << ": "
                  << (r.solved ? "solved" : "unsolved") << " (" << r.elapsed << "s)"
                  << (r.error.empty() ? "" : " error: " + r.error) << "\n";
      });
      std::cout << format_table(report);
      if (!report_path.empty()) std::ofstream(report_path) << report_to_json(report) << "\n";
      return 0;
    }

    if (*serve_cmd) {
      ServiceOptions opts;
      if (!store.empty()) opts.store_path = store;
      Service service(opts);
      HttpServer server(service, opts.max_body_bytes);
      const int bound = server.bind(host, port);
      std::cerr << "hypforge serving on http://" << host << ":" << bound << "\n";
      server.listen();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "hypforge: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
