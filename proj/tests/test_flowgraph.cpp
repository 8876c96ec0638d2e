#include <gtest/gtest.h>

#include <sstream>

#include "rrc/error.hpp"
#include "rrc/flowgraph.hpp"

using namespace rrc;

namespace {

CodeParams at(int n, int k, int r, int d, Rational a, Rational b) {
  return validate({n, k, r, d, std::move(a), std::move(b), std::nullopt});
}

// plain Edmonds-Karp on doubles scaled to integers, used only as a cross-check
long long bfs_maxflow(const FlowGraph& g, long long scale, long long inf) {
  const int n = g.vertex_count();
  std::vector<std::vector<long long>> cap(n, std::vector<long long>(n, 0));
  for (const auto& e : g.edges()) {
    cap[e.from][e.to] += e.capacity.infinite
                             ? inf
                             : static_cast<long long>(e.capacity.value * scale);
  }
  long long flow = 0;
  while (true) {
    std::vector<int> prev(n, -1);
    prev[0] = 0;
    std::vector<int> q{0};
    for (std::size_t i = 0; i < q.size() && prev[1] < 0; ++i) {
      for (int v = 0; v < n; ++v) {
        if (prev[v] < 0 && cap[q[i]][v] > 0) {
          prev[v] = q[i];
          q.push_back(v);
        }
      }
    }
    if (prev[1] < 0) return flow;
    long long push = inf;
    for (int v = 1; v != 0; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
    for (int v = 1; v != 0; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    flow += push;
  }
}

}  // namespace

TEST(FlowGraph, AdversarialGraphStructure) {
  const auto p = at(9, 5, 3, 2, 1, 1);
  const auto g = adversarial_graph(p);
  EXPECT_EQ(g.vertex_count(), 26);
  EXPECT_EQ(g.edges().size(), 40u);
  int beta_edges = 0, alpha_edges = 0, collector = 0;
  for (const auto& e : g.edges()) {
    if (e.to == g.sink()) ++collector;
    if (!e.capacity.infinite && e.capacity.value == p.beta && g.name(e.to) == "In[1,1]'1") {
      ++beta_edges;
    }
    if (g.name(e.from).rfind("In", 0) == 0 && !e.capacity.infinite) ++alpha_edges;
    EXPECT_NE(e.to, g.source());
    EXPECT_NE(e.from, g.sink());
  }
  EXPECT_EQ(beta_edges, 2);
  EXPECT_EQ(alpha_edges, 10);  // 9 initial nodes plus the newcomer
  EXPECT_EQ(collector, 5);
}

TEST(FlowGraph, AdversarialCollectors) {
  const auto s = adversarial_scenario(make_params(9, 5, 3, 2));
  ASSERT_EQ(s.collector.size(), 5u);
  EXPECT_EQ(s.failures.size(), 1u);
  EXPECT_EQ(s.failures[0].helpers, (std::vector<int>{1, 2}));
  EXPECT_EQ(s.collector[3], (NodeRef{1, 1}));
  EXPECT_EQ(s.collector[4], (NodeRef{1, 2}));
  const auto t = adversarial_scenario(make_params(12, 8, 4, 3));
  ASSERT_EQ(t.collector.size(), 8u);
  EXPECT_EQ(t.collector[6], (NodeRef{2, 1}));
  EXPECT_EQ(t.failures.size(), 2u);
  const auto u = adversarial_scenario(make_params(12, 2, 4, 3));
  EXPECT_TRUE(u.failures.empty());
  EXPECT_EQ(min_cut(adversarial_graph(make_params(12, 2, 4, 3))), 2);
}

TEST(FlowGraph, MinCutExamples) {
  EXPECT_EQ(min_cut(adversarial_graph(at(9, 5, 3, 2, 1, 1))), 5);
  EXPECT_EQ(min_cut(adversarial_graph(at(9, 5, 3, 2, Rational(1, 5), Rational(1, 10)))), 1);
  EXPECT_EQ(min_cut(adversarial_graph(at(12, 8, 4, 3, 2, 1))), 16);
}

TEST(FlowGraph, NoFailureAndAvoidingCollectors) {
  const auto p = at(9, 5, 3, 2, 1, 1);
  Scenario none{{}, {{0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 1}}};
  EXPECT_EQ(min_cut(build_graph(p, none)), 5);
  Scenario avoid{{FailureEvent{{0, 1}, {1, 2}}}, {{1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}}};
  EXPECT_EQ(min_cut(build_graph(p, avoid)), 5);
}

TEST(FlowGraph, InvalidScenarios) {
  const auto p = at(9, 5, 3, 2, 1, 1);
  Scenario host{{FailureEvent{{0, 1}, {0, 2}}}, adversarial_scenario(p).collector};
  try {
    build_graph(p, host);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidScenario);
  }
  Scenario partial{{}, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 1}}};
  EXPECT_THROW(build_graph(p, partial), Error);
  EXPECT_NO_THROW(build_graph(p, partial, false));
}

TEST(FlowGraph, CutMatchesIndependentMaxflow) {
  // alpha = 1/2, beta = 1/4 -> scale by 4
  const auto p = at(12, 8, 4, 3, Rational(1, 2), Rational(1, 4));
  const auto rep = certify_bound(p, 0);  // sampling path only produces adversarial
  const auto g = adversarial_graph(p);
  EXPECT_EQ(min_cut(g) * 4, Rational(bfs_maxflow(g, 4, 1000)));
  // a much larger stand-in for infinity gives the same cut
  EXPECT_EQ(min_cut(g) * 4, Rational(bfs_maxflow(g, 4, 1000000)));
  EXPECT_EQ(rep.adversarial_cut, capacity(p));
}

TEST(FlowGraph, CertifyExhaustiveSmall) {
  const auto a = certify_bound(at(9, 5, 3, 2, 1, 1), 100000);
  EXPECT_TRUE(a.certified);
  EXPECT_TRUE(a.exhaustive);
  EXPECT_EQ(a.bound, 5);
  const auto b = certify_bound(at(6, 3, 3, 2, 1, 1), 100000);
  EXPECT_TRUE(b.certified);
  EXPECT_TRUE(b.exhaustive);
  EXPECT_EQ(b.bound, 3);
}

TEST(FlowGraph, CertifySampledFlagship) {
  const auto rep = certify_bound(at(12, 8, 4, 3, 2, 1), 400, 42);
  EXPECT_TRUE(rep.certified);
  EXPECT_FALSE(rep.exhaustive);
  EXPECT_EQ(rep.bound, 16);
  EXPECT_EQ(rep.scenarios_checked, 400u);
}

TEST(FlowGraph, RelayerRackCompletionNeverHurts) {
  // Among size-k collectors containing a given relayer, one that takes the
  // relayer's whole rack does at least as well (smaller cut) as any that
  // does not.
  const auto p = at(9, 5, 3, 2, 1, Rational(1, 2));
  const FailureEvent ev{{0, 0}, {1, 2}};
  std::vector<int> nodes(9);
  for (int i = 0; i < 9; ++i) nodes[i] = i;
  Rational best_complete = 1000, best_other = 1000;
  std::vector<bool> pick(9, false);
  std::fill(pick.begin(), pick.begin() + 5, true);
  do {
    std::vector<NodeRef> c;
    bool has_relayer = false;
    int in_rack0 = 0;
    for (int i = 0; i < 9; ++i) {
      if (!pick[i]) continue;
      c.push_back({i / 3, i % 3});
      if (i == 0) has_relayer = true;
      if (i / 3 == 0) ++in_rack0;
    }
    if (!has_relayer) continue;
    const Rational cut = min_cut(build_graph(p, {{ev}, c}, false));
    if (in_rack0 == 3) {
      best_complete = std::min(best_complete, cut);
    } else {
      best_other = std::min(best_other, cut);
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  EXPECT_LE(best_complete, best_other);
}

TEST(FlowGraph, DotDump) {
  std::ostringstream out;
  write_dot(out, adversarial_graph(make_params(9, 5, 3, 2)));
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("digraph flow {", 0), 0u);
  EXPECT_NE(s.find("label=\"inf\""), std::string::npos);
  EXPECT_NE(s.find("label=\"S\""), std::string::npos);
}
