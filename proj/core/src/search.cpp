#include "hypforge/search.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <unordered_map>

namespace hypforge {

RankKey rank_key(const PlanningProblem& problem, std::span<const std::size_t> plan) {
  RankKey key;
  key.actions.assign(plan.begin(), plan.end());
  for (std::size_t a : plan) {
    const GroundAction& act = problem.actions.at(a);
    key.cost += act.cost;
    key.discards += act.added_discards();
    key.steps += act.added_steps();
    if (act.changes_location()) key.locations.push_back(*act.to);
  }
  return key;
}

namespace {

constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
constexpr std::size_t kMaxFluents = 8;
constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

struct Packed {
  std::uint8_t size = 0;
  std::array<FluentId, kMaxFluents> f{};

  std::span<const FluentId> view() const { return {f.data(), size}; }
  bool operator==(const Packed& o) const {
    return size == o.size && std::equal(f.begin(), f.begin() + size, o.f.begin());
  }
};

struct PackedHash {
  std::size_t operator()(const Packed& p) const {
    std::uint64_t h = 1469598103934665603ull ^ p.size;
    for (std::size_t i = 0; i < p.size; ++i) {
      h ^= p.f[i];
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

Packed pack(std::span<const FluentId> ids) {
  if (ids.size() > kMaxFluents) throw std::invalid_argument("search state has too many fluents");
  Packed p;
  p.size = static_cast<std::uint8_t>(ids.size());
  std::copy(ids.begin(), ids.end(), p.f.begin());
  std::sort(p.f.begin(), p.f.begin() + p.size);
  return p;
}

struct Node {
  std::uint32_t parent;
  std::uint32_t action;
  Cost g;
  Packed state;
};

struct Entry {
  Cost f;
  std::uint64_t seq;
  std::uint32_t node;

  bool operator>(const Entry& o) const { return f != o.f ? f > o.f : seq > o.seq; }
};

struct Found {
  std::vector<std::size_t> plan;
  RankKey key;
  Seconds found_at;
};

void check_problem(const PlanningProblem& p) {
  const std::size_t nf = p.fluents.size();
  auto in_range = [&](const std::vector<FluentId>& v) {
    return std::all_of(v.begin(), v.end(), [&](FluentId f) { return f < nf; });
  };
  if (p.initial.empty() || p.goal.empty()) throw std::invalid_argument("problem needs an initial state and a goal");
  if (!in_range(p.initial) || !in_range(p.goal)) throw std::invalid_argument("problem refers to unknown fluents");
  const std::size_t nl = p.locations.size();
  const std::size_t n = p.trace_symbols.size();
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    const GroundAction& a = p.actions[i];
    if (!in_range(a.pre) || !in_range(a.add) || !in_range(a.del) || a.cost < 0) {
      throw std::invalid_argument("action " + std::to_string(i) + " is malformed");
    }
    const bool needs_to = a.kind != ActionKind::discard;
    const bool needs_from = needs_to && a.kind != ActionKind::enter_start;
    const bool needs_index =
        a.kind == ActionKind::explain || a.kind == ActionKind::stay || a.kind == ActionKind::discard;
    if ((needs_to && (!a.to || *a.to >= nl)) || (needs_from && (!a.from || *a.from >= nl)) ||
        (needs_index && (!a.index || *a.index >= n))) {
      throw std::invalid_argument("action " + std::to_string(i) + " lacks its arguments");
    }
  }
}

}  // namespace

struct TopKSearch::Impl {
  std::shared_ptr<const PlanningProblem> problem;
  std::unordered_map<Packed, std::vector<std::uint32_t>, PackedHash> by_pre;
  Packed goal;

  // Lower bounds: remaining cost with the chain bound relaxed.
  std::vector<Cost> h_table;  // [location * (n + 1) + index]
  Cost h_idle = kInf;
  std::vector<FluentKind> fluent_kind;
  std::vector<std::size_t> fluent_arg;

  std::vector<Node> arena;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  std::size_t expanded = 0;

  std::vector<std::uint32_t> pending;
  std::vector<Seconds> pending_at;
  Cost pending_cost = 0;
  std::vector<Found> ready;
  bool done = false;
  Clock::time_point started = Clock::now();

  explicit Impl(std::shared_ptr<const PlanningProblem> p) : problem(std::move(p)) {
    if (!problem) throw std::invalid_argument("no problem given");
    check_problem(*problem);
    for (std::size_t i = 0; i < problem->actions.size(); ++i) {
      by_pre[pack(problem->actions[i].pre)].push_back(static_cast<std::uint32_t>(i));
    }
    goal = pack(problem->goal);
    for (const auto& f : problem->fluents) {
      fluent_kind.push_back(f.kind);
      fluent_arg.push_back(f.arg);
    }
    build_heuristic();
    Packed init = pack(problem->initial);
    const Cost h0 = h(init);
    if (h0 < kInf) {
      arena.push_back({kNoParent, 0, 0, init});
      open.push({h0, seq++, 0});
    }
  }

  void build_heuristic() {
    const PlanningProblem& p = *problem;
    const std::size_t nl = p.locations.size();
    const std::size_t n = p.trace_symbols.size();
    struct Edge {
      std::size_t from, to;
      Cost cost;
    };
    std::vector<std::vector<Edge>> explains(n);
    std::vector<std::vector<std::size_t>> stays(n);
    std::vector<Cost> discard(n, kInf);
    std::vector<std::vector<Edge>> moves_into(nl);  // reverse adjacency of in-layer moves
    std::vector<Edge> starts;
    for (const auto& a : p.actions) {
      // Every level of a grounded action has the same abstract effect.
      if (a.level && *a.level > 0) continue;
      switch (a.kind) {
        case ActionKind::enter_start: starts.push_back({0, *a.to, a.cost}); break;
        case ActionKind::explain: explains[*a.index].push_back({*a.from, *a.to, a.cost}); break;
        case ActionKind::stay: stays[*a.index].push_back(*a.from); break;
        case ActionKind::discard: discard[*a.index] = std::min(discard[*a.index], a.cost); break;
        case ActionKind::unobserved_step:
        case ActionKind::enter_hyper: moves_into[*a.to].push_back({*a.from, *a.to, a.cost}); break;
      }
    }
    h_table.assign(nl * (n + 1), kInf);
    auto at = [&](std::size_t loc, std::size_t i) -> Cost& { return h_table[loc * (n + 1) + i]; };
    for (std::size_t l = 0; l < nl; ++l) at(l, n) = 0;
    using Item = std::pair<Cost, std::size_t>;
    for (std::size_t i = n; i-- > 0;) {
      std::vector<Cost> d(nl, kInf);
      for (std::size_t l = 0; l < nl; ++l) {
        if (discard[i] < kInf && at(l, i + 1) < kInf) d[l] = std::min(d[l], discard[i] + at(l, i + 1));
      }
      for (std::size_t s : stays[i]) d[s] = std::min(d[s], at(s, i + 1));
      for (const auto& e : explains[i]) {
        if (at(e.to, i + 1) < kInf) d[e.from] = std::min(d[e.from], e.cost + at(e.to, i + 1));
      }
      std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
      for (std::size_t l = 0; l < nl; ++l) {
        if (d[l] < kInf) q.push({d[l], l});
      }
      while (!q.empty()) {
        auto [c, l] = q.top();
        q.pop();
        if (c > d[l]) continue;
        for (const auto& e : moves_into[l]) {
          if (c + e.cost < d[e.from]) {
            d[e.from] = c + e.cost;
            q.push({d[e.from], e.from});
          }
        }
      }
      for (std::size_t l = 0; l < nl; ++l) at(l, i) = d[l];
    }
    for (const auto& s : starts) {
      if (at(s.to, 0) < kInf) h_idle = std::min(h_idle, s.cost + at(s.to, 0));
    }
  }

  Cost h(const Packed& s) const {
    std::optional<std::size_t> loc;
    std::optional<std::size_t> idx;
    for (FluentId f : s.view()) {
      switch (fluent_kind[f]) {
        case FluentKind::idle: return h_idle;
        case FluentKind::at: loc = fluent_arg[f]; break;
        case FluentKind::next: idx = fluent_arg[f]; break;
        default: break;
      }
    }
    if (!loc || !idx) return 0;
    return h_table[*loc * (problem->trace_symbols.size() + 1) + *idx];
  }

  bool is_goal(const Packed& s) const {
    auto v = s.view();
    return std::includes(v.begin(), v.end(), goal.f.begin(), goal.f.begin() + goal.size);
  }

  void applicable(const Packed& s, std::vector<std::uint32_t>& out) const {
    out.clear();
    const std::size_t m = s.size;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      Packed sub;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (1u << b)) sub.f[sub.size++] = s.f[b];
      }
      auto it = by_pre.find(sub);
      if (it != by_pre.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
  }

  Packed apply(const Packed& s, const GroundAction& a) const {
    std::array<FluentId, 2 * kMaxFluents> buf{};
    std::size_t k = 0;
    for (FluentId f : s.view()) {
      if (!std::binary_search(a.del.begin(), a.del.end(), f)) buf[k++] = f;
    }
    for (FluentId f : a.add) {
      if (std::find(buf.begin(), buf.begin() + k, f) == buf.begin() + k) {
        if (k == buf.size()) throw std::invalid_argument("search state has too many fluents");
        buf[k++] = f;
      }
    }
    return pack({buf.data(), k});
  }

  std::vector<std::size_t> plan_of(std::uint32_t node) const {
    std::vector<std::size_t> plan;
    for (std::uint32_t n = node; arena[n].parent != kNoParent; n = arena[n].parent) plan.push_back(arena[n].action);
    std::reverse(plan.begin(), plan.end());
    return plan;
  }

  void flush() {
    std::vector<Found> group;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      auto plan = plan_of(pending[i]);
      RankKey key = rank_key(*problem, plan);
      group.push_back({std::move(plan), std::move(key), pending_at[i]});
    }
    std::sort(group.begin(), group.end(), [](const Found& a, const Found& b) { return a.key < b.key; });
    for (auto& g : group) ready.push_back(std::move(g));
    pending.clear();
    pending_at.clear();
  }

  std::size_t extend(std::size_t count, Clock::time_point deadline, std::stop_token stop, std::size_t max_nodes) {
    std::vector<std::uint32_t> succ;
    std::size_t ticks = 0;
    while (ready.size() < count && !done) {
      if (open.empty()) {
        flush();
        done = true;
        break;
      }
      const Entry top = open.top();
      if (!pending.empty() && top.f > pending_cost) {
        flush();
        continue;
      }
      if (++ticks % 64 == 0 && (stop.stop_requested() || Clock::now() >= deadline)) break;
      if (arena.size() >= max_nodes) break;
      open.pop();
      const Node node = arena[top.node];
      if (is_goal(node.state)) {
        pending_cost = node.g;
        pending.push_back(top.node);
        pending_at.push_back(Clock::now() - started);
        continue;
      }
      ++expanded;
      applicable(node.state, succ);
      for (std::uint32_t a : succ) {
        const GroundAction& act = problem->actions[a];
        Packed next = apply(node.state, act);
        const Cost hv = h(next);
        if (hv >= kInf) continue;
        const Cost g = node.g + act.cost;
        arena.push_back({top.node, a, g, next});
        open.push({g + hv, seq++, static_cast<std::uint32_t>(arena.size() - 1)});
      }
    }
    return ready.size();
  }
};

TopKSearch::TopKSearch(std::shared_ptr<const PlanningProblem> problem)
    : impl_(std::make_unique<Impl>(std::move(problem))) {}
TopKSearch::~TopKSearch() = default;
TopKSearch::TopKSearch(TopKSearch&&) noexcept = default;
TopKSearch& TopKSearch::operator=(TopKSearch&&) noexcept = default;

std::size_t TopKSearch::extend(std::size_t count, Clock::time_point deadline, std::stop_token stop,
                               std::size_t max_nodes) {
  return impl_->extend(count, deadline, std::move(stop), max_nodes);
}

std::size_t TopKSearch::available() const { return impl_->ready.size(); }
bool TopKSearch::exhausted() const { return impl_->done; }
std::size_t TopKSearch::expansions() const { return impl_->expanded; }
const PlanningProblem& TopKSearch::problem() const { return *impl_->problem; }

ResultSet TopKSearch::results(std::size_t first, std::size_t last) const {
  ResultSet rs;
  last = std::min(last, impl_->ready.size());
  for (std::size_t i = first; i < last; ++i) {
    const Found& f = impl_->ready[i];
    Hypothesis h = decode(*impl_->problem, std::span<const std::size_t>(f.plan));
    h.rank = i + 1;
    rs.hypotheses.push_back(std::move(h));
    rs.plans.push_back(f.plan);
    rs.found_at.push_back(f.found_at);
  }
  rs.exhausted = impl_->done && last == impl_->ready.size();
  rs.elapsed = Clock::now() - impl_->started;
  return rs;
}

ResultSet find_top_k(const PlanningProblem& problem, const SearchConfig& config) {
  if (config.k == 0) throw std::invalid_argument("k must be positive");
  if (config.time_budget <= Seconds::zero()) throw std::invalid_argument("time budget must be positive");
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(config.time_budget);
  TopKSearch search(std::shared_ptr<const PlanningProblem>(&problem, [](const PlanningProblem*) {}));
  search.extend(config.k, deadline, config.stop, config.max_nodes);
  ResultSet rs = search.results(0, config.k);
  rs.elapsed = Clock::now() - start;
  return rs;
}

bool check_ground_truth(const ResultSet& results, const Hypothesis& truth) {
  const auto want = truth.state_sequence();
  return std::any_of(results.hypotheses.begin(), results.hypotheses.end(),
                     [&](const Hypothesis& h) { return h.state_sequence() == want; });
}

}  // namespace hypforge
