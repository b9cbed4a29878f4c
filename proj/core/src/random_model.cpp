#include "hypforge/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hypforge {

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = Rng::max() - (Rng::max() % bound + 1) % bound;
  std::uint64_t x = rng();
  while (x > limit) x = rng();
  return x % bound;
}

double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace

ModelSpec generate_random_model(const RandomModelOptions& o) {
  if (o.n_states < 2) throw std::invalid_argument("a random model needs at least 2 states");
  if (!(o.bad_fraction >= 0.0 && o.bad_fraction <= 1.0)) throw std::invalid_argument("bad fraction must be in [0, 1]");
  if (o.min_out_degree < 1 || o.max_out_degree < o.min_out_degree) {
    throw std::invalid_argument("invalid out-degree range");
  }
  const std::size_t n = o.n_states;
  const std::size_t vocab = o.vocab_size == 0 ? n : o.vocab_size;
  Rng rng(o.seed);

  std::vector<std::set<std::size_t>> succ(n);
  std::vector<std::size_t> order(n - 1);
  for (std::size_t i = 0; i < n - 1; ++i) order[i] = i + 1;
  shuffle(order, rng);
  order.insert(order.begin(), 0);
  for (std::size_t i = 1; i < n; ++i) succ[order[uniform_below(rng, i)]].insert(order[i]);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t want = std::min<std::size_t>(
        n - 1, o.min_out_degree + uniform_below(rng, o.max_out_degree - o.min_out_degree + 1));
    while (succ[s].size() < want) {
      const std::size_t t = uniform_below(rng, n);
      if (t != s) succ[s].insert(t);
    }
  }

  std::vector<bool> bad(n, false);
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  shuffle(ids, rng);
  const auto n_bad = static_cast<std::size_t>(std::floor(o.bad_fraction * static_cast<double>(n) + 1e-9));
  for (std::size_t i = 0; i < n_bad; ++i) bad[ids[i]] = true;

  ModelSpec m;
  m.name = "random-" + std::to_string(n) + "-" + std::to_string(o.seed);
  m.default_type = StateType::good;
  m.start_state = "s0";
  for (std::size_t s = 0; s < n; ++s) {
    State st;
    st.id = "s" + std::to_string(s);
    st.type = bad[s] ? StateType::bad : StateType::good;
    if (bad[s]) st.declared_type = StateType::bad;
    st.has_observation_set = true;
    const std::size_t k = 1 + uniform_below(rng, std::min<std::size_t>(3, vocab));
    std::set<std::size_t> obs;
    while (obs.size() < k) obs.insert(uniform_below(rng, vocab));
    for (std::size_t x : obs) st.observations.push_back("o" + std::to_string(x));
    for (std::size_t t : succ[s]) st.outgoing.push_back({"s" + std::to_string(t), {}});
    Hyperstate h;
    h.id = st.id;
    h.singleton = true;
    h.members.push_back(std::move(st));
    m.hyperstates.push_back(std::move(h));
  }
  return m;
}

ModelSpec generate_random_model(std::size_t n_states, double bad_fraction, std::uint64_t seed) {
  RandomModelOptions o;
  o.n_states = n_states;
  o.bad_fraction = bad_fraction;
  o.seed = seed;
  return generate_random_model(o);
}

}  // namespace hypforge
