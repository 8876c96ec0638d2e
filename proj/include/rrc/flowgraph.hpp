#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rrc/params.hpp"
#include "rrc/rational.hpp"

namespace rrc {

struct Capacity {
  bool infinite = false;
  Rational value = 0;

  static Capacity finite(Rational v) { return {false, std::move(v)}; }
  static Capacity unbounded() { return {true, 0}; }
};

struct FlowEdge {
  int from;
  int to;
  Capacity capacity;
};

/// Capacitated DAG with a single source and sink.
class FlowGraph {
 public:
  FlowGraph();

  int add_vertex(std::string name);
  void add_edge(int from, int to, Capacity capacity);

  int source() const noexcept { return 0; }
  int sink() const noexcept { return 1; }
  int vertex_count() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
  const std::vector<FlowEdge>& edges() const noexcept { return edges_; }

 private:
  std::vector<std::string> names_;
  std::vector<FlowEdge> edges_;
};

struct FailureEvent {
  NodeRef node;
  std::vector<int> helpers;  // d distinct racks other than node.rack
};

/// A failure/repair history followed by one data collector. Collector
/// entries name nodes by position; the live version of each is used.
struct Scenario {
  std::vector<FailureEvent> failures;
  std::vector<NodeRef> collector;
};

/// Information flow graph for `s`. With `enforce_collector_rule`, a
/// collector that takes a relayer must take its whole rack. Throws
/// InvalidScenario.
FlowGraph build_graph(const CodeParams& p, const Scenario& s,
                      bool enforce_collector_rule = true);

/// Exact maximum S-T flow. Infinite edges become (sum of finite capacities) + 1.
Rational min_cut(const FlowGraph& g);

/// The first m relayers fail in order, each repaired from the first d other
/// relayers; the collector takes racks 1..m and k - m n/r non-relayers of
/// rack m+1.
Scenario adversarial_scenario(const CodeParams& p);
FlowGraph adversarial_graph(const CodeParams& p);

struct CertifyReport {
  bool certified = false;
  Rational bound;            // capacity formula
  Rational adversarial_cut;  // must equal bound
  Rational min_observed;     // smallest cut among checked scenarios
  std::size_t scenarios_checked = 0;
  bool exhaustive = false;
  std::vector<Scenario> counterexamples;
};

/// Checks both directions of the capacity bound: the adversarial graph meets
/// it, and no enumerated (or, past `budget`, seeded-sampled) scenario cuts
/// below it.
CertifyReport certify_bound(const CodeParams& p, std::size_t budget, std::uint64_t seed = 1);

/// Graphviz rendering: one line per vertex, one per edge with its capacity.
void write_dot(std::ostream& out, const FlowGraph& g);

}  // namespace rrc
