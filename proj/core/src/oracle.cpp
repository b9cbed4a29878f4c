#include "hypforge/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace hypforge {

namespace {

using StateVec = std::vector<FluentId>;

struct Graph {
  std::vector<StateVec> states;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;  // (action, target)
  std::vector<std::size_t> topo;
  std::vector<bool> goal;
};

bool subset(const std::vector<FluentId>& small, const StateVec& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Graph build(const PlanningProblem& p, std::size_t bound) {
  std::map<FluentId, std::vector<std::size_t>> bucket;
  std::vector<std::size_t> unconditional;
  for (std::size_t a = 0; a < p.actions.size(); ++a) {
    const auto& pre = p.actions[a].pre;
    if (pre.empty()) {
      unconditional.push_back(a);
    } else {
      bucket[*std::min_element(pre.begin(), pre.end())].push_back(a);
    }
  }
  Graph g;
  std::map<StateVec, std::size_t> index;
  StateVec init = p.initial;
  std::sort(init.begin(), init.end());
  index[init] = 0;
  g.states.push_back(init);
  for (std::size_t v = 0; v < g.states.size(); ++v) {
    const StateVec s = g.states[v];
    std::vector<std::size_t> cands = unconditional;
    for (FluentId f : s) {
      if (auto it = bucket.find(f); it != bucket.end()) cands.insert(cands.end(), it->second.begin(), it->second.end());
    }
    std::sort(cands.begin(), cands.end());
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a : cands) {
      const GroundAction& act = p.actions[a];
      if (!subset(act.pre, s)) continue;
      StateVec t;
      std::set_difference(s.begin(), s.end(), act.del.begin(), act.del.end(), std::back_inserter(t));
      StateVec merged;
      std::set_union(t.begin(), t.end(), act.add.begin(), act.add.end(), std::back_inserter(merged));
      auto [it, fresh] = index.try_emplace(merged, g.states.size());
      if (fresh) {
        if (g.states.size() >= bound) throw ResourceError("state graph exceeds the node bound");
        g.states.push_back(merged);
      }
      out.emplace_back(a, it->second);
    }
    g.edges.push_back(std::move(out));
  }
  StateVec goal = p.goal;
  std::sort(goal.begin(), goal.end());
  for (const auto& s : g.states) g.goal.push_back(subset(goal, s));

  // Reverse postorder of an iterative DFS; a back edge means a cycle.
  const std::size_t n = g.states.size();
  std::vector<int> color(n, 0);
  std::vector<std::size_t> post;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  color[0] = 1;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < g.edges[v].size()) {
      const std::size_t w = g.edges[v][i++].second;
      if (color[w] == 1) throw std::logic_error("state graph has a cycle");
      if (color[w] == 0) {
        color[w] = 1;
        stack.emplace_back(w, 0);
      }
    } else {
      color[v] = 2;
      post.push_back(v);
      stack.pop_back();
    }
  }
  g.topo.assign(post.rbegin(), post.rend());
  return g;
}

RankKey extend(const RankKey& k, const GroundAction& a, std::size_t index) {
  RankKey out = k;
  out.cost += a.cost;
  out.discards += a.added_discards();
  out.steps += a.added_steps();
  if (a.changes_location()) out.locations.push_back(*a.to);
  out.actions.push_back(index);
  return out;
}

void trim(std::vector<RankKey>& v, std::size_t k) {
  std::sort(v.begin(), v.end());
  if (v.size() > k) v.resize(k);
}

}  // namespace

ResultSet exact_oracle(const PlanningProblem& problem, std::size_t k, const OracleOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const auto start = Clock::now();
  const Graph g = build(problem, options.node_bound);
  std::vector<std::vector<RankKey>> best(g.states.size());
  best[0].push_back(RankKey{});
  std::vector<RankKey> goals;
  for (std::size_t v : g.topo) {
    trim(best[v], k);
    if (g.goal[v]) goals.insert(goals.end(), best[v].begin(), best[v].end());
    for (const auto& [a, w] : g.edges[v]) {
      for (const auto& key : best[v]) best[w].push_back(extend(key, problem.actions[a], a));
      if (best[w].size() > 4 * k) trim(best[w], k);
    }
    best[v].clear();
    best[v].shrink_to_fit();
  }
  trim(goals, k);

  ResultSet rs;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    Hypothesis h = decode(problem, std::span<const std::size_t>(goals[i].actions));
    h.rank = i + 1;
    rs.hypotheses.push_back(std::move(h));
    rs.plans.push_back(goals[i].actions);
    rs.found_at.push_back(Clock::now() - start);
  }
  rs.exhausted = count_plans(problem, options) <= k;
  rs.elapsed = Clock::now() - start;
  return rs;
}

std::uint64_t count_plans(const PlanningProblem& problem, const OracleOptions& options) {
  const Graph g = build(problem, options.node_bound);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> paths(g.states.size(), 0);
  paths[0] = 1;
  std::uint64_t total = 0;
  auto add = [&](std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; };
  for (std::size_t v : g.topo) {
    if (g.goal[v]) total = add(total, paths[v]);
    for (const auto& e : g.edges[v]) paths[e.second] = add(paths[e.second], paths[v]);
  }
  return total;
}

}  // namespace hypforge
