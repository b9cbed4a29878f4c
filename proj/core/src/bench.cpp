#include "hypforge/bench.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hypforge/random_model.hpp"
#include "json.hpp"

#ifndef HYPFORGE_VERSION
#define HYPFORGE_VERSION "0.0.0"
#endif

namespace hypforge {

std::string_view version() { return HYPFORGE_VERSION; }

void BenchConfig::check() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(bad_fraction)) throw std::invalid_argument("bad fraction must be in [0, 1]");
  if (!prob(noise.p_missing) || !prob(noise.p_inconsistent)) {
    throw std::invalid_argument("noise probabilities must be in [0, 1]");
  }
  for (auto s : state_counts) {
    if (s < 2) throw std::invalid_argument("state counts must be at least 2");
  }
  for (auto o : obs_counts) {
    if (o < 1) throw std::invalid_argument("observation counts must be at least 1");
  }
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (time_budget <= Seconds::zero()) throw std::invalid_argument("time budget must be positive");
  if (workers == 0) throw std::invalid_argument("need at least one worker");
}

const CellResult* BenchReport::cell(std::size_t states, std::size_t observations) const {
  for (const auto& c : cells) {
    if (c.states == states && c.observations == observations) return &c;
  }
  return nullptr;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, std::size_t states, std::size_t observations, std::size_t instance) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ states);
  h = splitmix(h ^ observations);
  return splitmix(h ^ instance);
}

InstanceResult run_instance(const BenchConfig& config, std::size_t states, std::size_t observations,
                            std::size_t instance) {
  InstanceResult r;
  r.states = states;
  r.observations = observations;
  r.instance = instance;
  r.seed = instance_seed(config.seed, states, observations, instance);
  const auto start = Clock::now();
  try {
    const ModelSpec model = generate_random_model(states, config.bad_fraction, r.seed);
    const GroundTruth gt = generate_ground_truth(model, observations, config.noise, splitmix(r.seed));
    r.trace_length = gt.trace.size();
    const PlanningProblem problem = compile(model, gt.trace, CostParams{});
    SearchConfig sc;
    sc.k = config.k;
    sc.time_budget = config.time_budget;
    sc.max_nodes = config.max_nodes;
    const ResultSet rs = find_top_k(problem, sc);
    r.found = rs.hypotheses.size();
    r.exhausted = rs.exhausted;
    const auto want = gt.truth.state_sequence();
    for (std::size_t i = 0; i < rs.hypotheses.size(); ++i) {
      if (rs.hypotheses[i].state_sequence() == want) {
        r.solved = true;
        r.time_to_truth = rs.found_at[i].count();
        break;
      }
    }
  } catch (const std::exception& e) {
    r.error = e.what();
    r.solved = false;
  }
  r.elapsed = Seconds(Clock::now() - start).count();
  return r;
}

BenchReport run_benchmark(const BenchConfig& config, const std::function<void(const InstanceResult&)>& progress) {
  config.check();
  BenchReport report;
  report.config = config;
  report.engine_version = std::string(version());
  struct Job {
    std::size_t states, obs, instance;
  };
  std::vector<Job> jobs;
  for (auto s : config.state_counts) {
    for (auto o : config.obs_counts) {
      for (std::size_t i = 0; i < config.instances_per_cell; ++i) jobs.push_back({s, o, i});
    }
  }
  report.instances.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      report.instances[j] = run_instance(config, jobs[j].states, jobs[j].obs, jobs[j].instance);
      if (progress) {
        std::lock_guard lock(mu);
        progress(report.instances[j]);
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n_workers = std::min(config.workers, std::max<std::size_t>(jobs.size(), 1));
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (config.instances_per_cell == 0) return report;
  for (auto s : config.state_counts) {
    for (auto o : config.obs_counts) {
      CellResult c;
      c.states = s;
      c.observations = o;
      double total = 0.0;
      for (const auto& r : report.instances) {
        if (r.states != s || r.observations != o) continue;
        ++c.instances;
        if (r.solved) {
          ++c.solved;
          total += r.time_to_truth.value_or(0.0);
        }
      }
      c.percent_solved = 100.0 * static_cast<double>(c.solved) / static_cast<double>(c.instances);
      if (c.solved > 0) c.mean_time = total / static_cast<double>(c.solved);
      report.cells.push_back(c);
    }
  }
  return report;
}

std::string report_to_json(const BenchReport& report) {
  using nlohmann::json;
  const auto& c = report.config;
  json cfg = {{"state_counts", c.state_counts},
              {"obs_counts", c.obs_counts},
              {"instances_per_cell", c.instances_per_cell},
              {"bad_fraction", c.bad_fraction},
              {"p_missing", c.noise.p_missing},
              {"p_inconsistent", c.noise.p_inconsistent},
              {"seed", c.seed},
              {"time_budget_s", c.time_budget.count()},
              {"k", c.k},
              {"workers", c.workers}};
  json cells = json::array();
  for (const auto& cell : report.cells) {
    cells.push_back({{"states", cell.states},
                     {"observations", cell.observations},
                     {"instances", cell.instances},
                     {"solved", cell.solved},
                     {"percent_solved", cell.percent_solved},
                     {"mean_time_s", cell.mean_time ? json(*cell.mean_time) : json(nullptr)}});
  }
  json inst = json::array();
  for (const auto& r : report.instances) {
    inst.push_back({{"states", r.states},
                    {"observations", r.observations},
                    {"instance", r.instance},
                    {"seed", r.seed},
                    {"trace_length", r.trace_length},
                    {"solved", r.solved},
                    {"time_to_truth_s", r.time_to_truth ? json(*r.time_to_truth) : json(nullptr)},
                    {"elapsed_s", r.elapsed},
                    {"found", r.found},
                    {"exhausted", r.exhausted},
                    {"error", r.error}});
  }
  json out = {{"engine_version", report.engine_version}, {"config", cfg}, {"cells", cells}, {"instances", inst}};
  return out.dump(2);
}

std::string format_table(const BenchReport& report) {
  const auto& states = report.config.state_counts;
  std::ostringstream out;
  char buf[64];
  out << "  obs |";
  for (auto s : states) {
    std::snprintf(buf, sizeof buf, " %4zu states: %%solved    time |", s);
    out << buf;
  }
  out << "\n------+";
  for (std::size_t i = 0; i < states.size(); ++i) out << std::string(32, '-') << "+";
  out << "\n";
  for (auto o : report.config.obs_counts) {
    std::snprintf(buf, sizeof buf, " %4zu |", o);
    out << buf;
    for (auto s : states) {
      const CellResult* c = report.cell(s, o);
      if (!c) {
        out << std::string(32, ' ') << "|";
        continue;
      }
      if (c->mean_time) {
        std::snprintf(buf, sizeof buf, "             %6.0f%% %8.2fs |", c->percent_solved, *c->mean_time);
      } else {
        std::snprintf(buf, sizeof buf, "             %6.0f%%        - |", c->percent_solved);
      }
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace hypforge
