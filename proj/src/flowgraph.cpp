#include "rrc/flowgraph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>

#include "rrc/error.hpp"

namespace rrc {

FlowGraph::FlowGraph() : names_{"S", "T"} {}

int FlowGraph::add_vertex(std::string name) {
  names_.push_back(std::move(name));
  return vertex_count() - 1;
}

void FlowGraph::add_edge(int from, int to, Capacity capacity) {
  if (from < 0 || from >= vertex_count() || to < 0 || to >= vertex_count()) {
    fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
  }
  if (to == source() || from == sink()) {
    fail(ErrorCode::InvalidArgument, "edges may not enter S or leave T");
  }
  edges_.push_back({from, to, std::move(capacity)});
}

namespace {

std::string vertex_name(const char* kind, NodeRef n, int version) {
  std::string s = std::string(kind) + "[" + std::to_string(n.rack + 1) + "," +
                  std::to_string(n.slot + 1) + "]";
  if (version > 0) s += "'" + std::to_string(version);
  return s;
}

void check_collector(const CodeParams& p, const std::vector<NodeRef>& collector, bool rule) {
  const int per_rack = p.nodes_per_rack();
  if (static_cast<int>(collector.size()) != p.k) {
    fail(ErrorCode::InvalidScenario, "collector must take exactly k nodes");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& c : collector) {
    if (c.rack < 0 || c.rack >= p.r || c.slot < 0 || c.slot >= per_rack) {
      fail(ErrorCode::InvalidScenario, "collector node out of range");
    }
    if (!seen.insert({c.rack, c.slot}).second) {
      fail(ErrorCode::InvalidScenario, "collector nodes must be distinct");
    }
  }
  if (!rule) return;
  for (const auto& c : collector) {
    if (c.slot != 0) continue;
    for (int s = 1; s < per_rack; ++s) {
      if (!seen.count({c.rack, s})) {
        fail(ErrorCode::InvalidScenario,
             "collector takes the relayer of rack " + std::to_string(c.rack + 1) +
                 " but not the whole rack");
      }
    }
  }
}

}  // namespace

FlowGraph build_graph(const CodeParams& p, const Scenario& s, bool enforce_collector_rule) {
  const int per_rack = p.nodes_per_rack();
  FlowGraph g;
  const Capacity inf = Capacity::unbounded();
  const Capacity alpha = Capacity::finite(p.alpha);

  // out[rack][slot] is the live Out vertex of that node
  std::vector<std::vector<int>> out(static_cast<std::size_t>(p.r), std::vector<int>(per_rack));
  std::vector<std::vector<int>> version(static_cast<std::size_t>(p.r),
                                        std::vector<int>(per_rack, 0));
  for (int h = 0; h < p.r; ++h) {
    for (int i = 0; i < per_rack; ++i) {
      const int in_v = g.add_vertex(vertex_name("In", {h, i}, 0));
      const int out_v = g.add_vertex(vertex_name("Out", {h, i}, 0));
      g.add_edge(g.source(), in_v, inf);
      g.add_edge(in_v, out_v, alpha);
      out[h][i] = out_v;
    }
    for (int i = 1; i < per_rack; ++i) g.add_edge(out[h][i], out[h][0], inf);
  }

  for (const auto& ev : s.failures) {
    const int h = ev.node.rack;
    const int f = ev.node.slot;
    if (h < 0 || h >= p.r || f < 0 || f >= per_rack) {
      fail(ErrorCode::InvalidScenario, "failed node out of range");
    }
    try {
      check_helpers(p, h, ev.helpers);
    } catch (const Error& e) {
      fail(ErrorCode::InvalidScenario, e.what());
    }
    std::vector<int> next(per_rack);
    std::vector<int> in_new(per_rack);
    for (int j = 0; j < per_rack; ++j) {
      ++version[h][j];
      in_new[j] = g.add_vertex(vertex_name("In", {h, j}, version[h][j]));
      next[j] = g.add_vertex(vertex_name("Out", {h, j}, version[h][j]));
    }
    for (int j = 0; j < per_rack; ++j) {
      if (j == f) continue;
      g.add_edge(out[h][j], in_new[j], inf);
      g.add_edge(in_new[j], next[j], inf);
      g.add_edge(out[h][j], in_new[f], inf);
    }
    for (int helper : ev.helpers) g.add_edge(out[helper][0], in_new[f], Capacity::finite(p.beta));
    g.add_edge(in_new[f], next[f], alpha);
    for (int j = 1; j < per_rack; ++j) g.add_edge(next[j], next[0], inf);
    out[h] = next;
  }

  check_collector(p, s.collector, enforce_collector_rule);
  for (const auto& c : s.collector) g.add_edge(out[c.rack][c.slot], g.sink(), inf);
  return g;
}

namespace {

// Dinic on integer capacities.
class Dinic {
 public:
  explicit Dinic(int n) : adj_(static_cast<std::size_t>(n)), level_(n), it_(n) {}

  void add(int u, int v, std::int64_t c) {
    adj_[u].push_back(static_cast<int>(e_.size()));
    e_.push_back({v, c});
    adj_[v].push_back(static_cast<int>(e_.size()));
    e_.push_back({u, 0});
  }

  std::int64_t run(int s, int t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) {
        flow += pushed;
      }
    }
    return flow;
  }

 private:
  struct E {
    int to;
    std::int64_t cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : adj_[u]) {
        if (e_[id].cap > 0 && level_[e_[id].to] < 0) {
          level_[e_[id].to] = level_[u] + 1;
          q.push(e_[id].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t limit) {
    if (u == t) return limit;
    for (int& i = it_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      const int id = adj_[u][i];
      E& edge = e_[id];
      if (edge.cap <= 0 || level_[edge.to] != level_[u] + 1) continue;
      if (std::int64_t got = dfs(edge.to, t, std::min(limit, edge.cap))) {
        edge.cap -= got;
        e_[id ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<E> e_;
  std::vector<int> level_;
  std::vector<int> it_;
};

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max()) {
    fail(ErrorCode::InvalidArgument, "capacities too large for exact max-flow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational min_cut(const FlowGraph& g) {
  BigInt scale = 1;
  for (const auto& e : g.edges()) {
    if (e.capacity.infinite) continue;
    if (e.capacity.value < 0) fail(ErrorCode::InvalidArgument, "negative capacity");
    const BigInt den = boost::multiprecision::denominator(e.capacity.value);
    scale = scale / boost::multiprecision::gcd(scale, den) * den;
  }
  BigInt finite_sum = 0;
  for (const auto& e : g.edges()) {
    if (!e.capacity.infinite) {
      finite_sum += boost::multiprecision::numerator(e.capacity.value) *
                    (scale / boost::multiprecision::denominator(e.capacity.value));
    }
  }
  const std::int64_t infinity = to_int64(finite_sum + 1);
  Dinic dinic(g.vertex_count());
  for (const auto& e : g.edges()) {
    std::int64_t c = infinity;
    if (!e.capacity.infinite) {
      c = to_int64(boost::multiprecision::numerator(e.capacity.value) *
                   (scale / boost::multiprecision::denominator(e.capacity.value)));
    }
    dinic.add(e.from, e.to, c);
  }
  return Rational(BigInt(dinic.run(g.source(), g.sink())), scale);
}

Scenario adversarial_scenario(const CodeParams& p) {
  const int per_rack = p.nodes_per_rack();
  Scenario s;
  for (int l = 0; l < p.m; ++l) {
    FailureEvent ev{{l, 0}, {}};
    for (int h = 0; static_cast<int>(ev.helpers.size()) < p.d; ++h) {
      if (h != l) ev.helpers.push_back(h);
    }
    s.failures.push_back(std::move(ev));
  }
  for (int h = 0; h < p.m; ++h) {
    for (int i = 0; i < per_rack; ++i) s.collector.push_back({h, i});
  }
  for (int i = 1; i <= p.k - p.m * per_rack; ++i) s.collector.push_back({p.m, i});
  return s;
}

FlowGraph adversarial_graph(const CodeParams& p) { return build_graph(p, adversarial_scenario(p)); }

namespace {

bool obeys_rule(const std::vector<NodeRef>& c, int per_rack) {
  for (const auto& a : c) {
    if (a.slot != 0) continue;
    const auto in_rack = std::count_if(c.begin(), c.end(), [&](const NodeRef& b) {
      return b.rack == a.rack;
    });
    if (in_rack != per_rack) return false;
  }
  return true;
}

std::vector<std::vector<NodeRef>> all_collectors(const CodeParams& p) {
  const int per_rack = p.nodes_per_rack();
  std::vector<std::vector<NodeRef>> out;
  std::vector<int> idx(static_cast<std::size_t>(p.k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<NodeRef> c;
    for (int v : idx) c.push_back({v / per_rack, v % per_rack});
    if (obeys_rule(c, per_rack)) out.push_back(std::move(c));
    int i = p.k - 1;
    while (i >= 0 && idx[i] == p.n - p.k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p.k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<std::vector<int>> helper_sets(const CodeParams& p, int host) {
  std::vector<int> pool;
  for (int h = 0; h < p.r; ++h) {
    if (h != host) pool.push_back(h);
  }
  std::vector<std::vector<int>> out;
  const int total = static_cast<int>(pool.size());
  std::vector<bool> pick(static_cast<std::size_t>(total), false);
  std::fill(pick.begin(), pick.begin() + p.d, true);
  do {
    std::vector<int> set;
    for (int i = 0; i < total; ++i) {
      if (pick[i]) set.push_back(pool[i]);
    }
    out.push_back(std::move(set));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

Scenario sample_scenario(const CodeParams& p, std::mt19937_64& rng) {
  const int per_rack = p.nodes_per_rack();
  Scenario s;
  const int rounds = std::uniform_int_distribution<int>(0, std::max(1, p.m))(rng);
  for (int i = 0; i < rounds; ++i) {
    FailureEvent ev;
    ev.node = {std::uniform_int_distribution<int>(0, p.r - 1)(rng),
               std::uniform_int_distribution<int>(0, per_rack - 1)(rng)};
    std::vector<int> pool;
    for (int h = 0; h < p.r; ++h) {
      if (h != ev.node.rack) pool.push_back(h);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    ev.helpers.assign(pool.begin(), pool.begin() + p.d);
    s.failures.push_back(std::move(ev));
  }
  std::vector<int> nodes(static_cast<std::size_t>(p.n));
  std::iota(nodes.begin(), nodes.end(), 0);
  while (true) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<NodeRef> c;
    for (int i = 0; i < p.k; ++i) c.push_back({nodes[i] / per_rack, nodes[i] % per_rack});
    if (obeys_rule(c, per_rack)) {
      s.collector = std::move(c);
      return s;
    }
  }
}

}  // namespace

CertifyReport certify_bound(const CodeParams& p, std::size_t budget, std::uint64_t seed) {
  CertifyReport rep;
  rep.bound = capacity(p);
  const Scenario adv = adversarial_scenario(p);
  rep.adversarial_cut = min_cut(build_graph(p, adv));
  rep.min_observed = rep.adversarial_cut;
  if (rep.adversarial_cut != rep.bound) rep.counterexamples.push_back(adv);

  auto check = [&](const Scenario& s) {
    const Rational cut = min_cut(build_graph(p, s));
    ++rep.scenarios_checked;
    if (cut < rep.min_observed) rep.min_observed = cut;
    if (cut < rep.bound) rep.counterexamples.push_back(s);
  };

  const auto collectors = all_collectors(p);
  const int per_rack = p.nodes_per_rack();
  std::size_t per_failure = 0;
  for (int h = 0; h < p.r; ++h) per_failure += helper_sets(p, h).size();
  per_failure *= static_cast<std::size_t>(per_rack);
  const std::size_t total = collectors.size() * (1 + per_failure);

  if (total <= budget) {
    rep.exhaustive = true;
    for (const auto& c : collectors) check({{}, c});
    for (int h = 0; h < p.r; ++h) {
      const auto sets = helper_sets(p, h);
      for (int f = 0; f < per_rack; ++f) {
        for (const auto& hs : sets) {
          for (const auto& c : collectors) check({{FailureEvent{{h, f}, hs}}, c});
        }
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < budget; ++i) check(sample_scenario(p, rng));
  }
  rep.certified = rep.counterexamples.empty();
  return rep;
}

void write_dot(std::ostream& out, const FlowGraph& g) {
  out << "digraph flow {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    out << "  v" << v << " [label=\"" << g.name(v) << "\"];\n";
  }
  for (const auto& e : g.edges()) {
    out << "  v" << e.from << " -> v" << e.to << " [label=\""
        << (e.capacity.infinite ? std::string("inf") : to_exact(e.capacity.value)) << "\"];\n";
  }
  out << "}\n";
}

}  // namespace rrc
