#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rrc/field.hpp"
#include "rrc/params.hpp"

namespace rrc {

enum class Family : std::uint8_t { Alpha1 = 1, HybridMsrr = 2, Mbrr = 3 };

const char* to_string(Family f) noexcept;
/// Accepts "alpha1", "hybrid" / "hybrid-msrr", "mbrr". Throws InvalidArgument.
Family parse_family(const std::string& name);

using NodeData = std::vector<Elem>;
/// Contents of all n nodes for one stripe, indexed by node.
using Stripe = std::vector<NodeData>;

/// Symbols moved while rebuilding one node. Intra-rack traffic counts only
/// what the newcomer reads inside its own rack.
struct RepairTrace {
  int cross_rack_symbols = 0;
  int intra_rack_symbols = 0;
  std::map<int, int> per_helper;  // helper rack -> symbols sent
  std::vector<int> helpers;
  NodeData recovered;
};

/// A code whose node v stores s * generator[:, v*alpha .. (v+1)*alpha).
struct LinearCode {
  Field field;
  CodeParams params;
  int alpha;       // symbols per node
  int file_size;   // B, data symbols per stripe
  FieldMatrix generator;  // B x n*alpha

  int nodes() const noexcept { return params.n; }
  /// B x (|nodes| * alpha) stacked node columns.
  FieldMatrix node_columns(std::span<const int> node_ids) const;
  /// s * generator, split per node. Throws BadInput on length mismatch.
  Stripe encode(std::span<const Elem> data) const;
  /// Solves for the data from the given nodes. Throws DecodeFailed when the
  /// nodes do not span the data or the contents are inconsistent.
  std::vector<Elem> decode(std::span<const int> node_ids,
                           std::span<const NodeData> contents) const;
};

struct SubsetReport {
  bool ok = true;
  bool exhaustive = true;
  std::size_t checked = 0;
  std::size_t failures = 0;
};

/// Rank test of every k-subset of nodes (or `limit` seeded samples when
/// C(n, k) exceeds it).
SubsetReport check_all_k_subsets(const LinearCode& c, std::size_t limit = 100000,
                                 std::uint64_t seed = 1);

/// Systematic form check: for every l <= min(k, n-k), every choice of l data
/// nodes (row blocks) and l parity nodes (column blocks) of the parity
/// columns, the l*alpha square block is non-singular. `data_nodes` lists the
/// k systematic nodes in data order.
bool check_systematic_minors(const LinearCode& c, std::span<const int> data_nodes);

/// Lexicographic k-combinations of {0..n-1}; calls fn(span) until it returns false.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const int>(idx))) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::uint64_t binomial(int n, int k);

/// Precomputed solve for a fixed node set: picks B independent received
/// symbols and inverts the generator restricted to them.
struct DecodePlan {
  std::vector<int> nodes;
  std::vector<std::size_t> picks;  // positions in the concatenated contents
  FieldMatrix inverse;             // B x B
};
/// Throws DecodeFailed when the nodes span fewer than B dimensions.
DecodePlan plan_decode(const LinearCode& c, std::span<const int> node_ids);
/// `contents` follow plan.nodes.
std::vector<Elem> apply_decode(const LinearCode& c, const DecodePlan& plan,
                               std::span<const NodeData> contents);

/// Which stored symbols a projection repair reads, and how it combines them.
struct ProjectionPlan {
  NodeRef failed;
  std::vector<std::pair<int, int>> reads;  // (node, symbol) actually used
  FieldMatrix combine;                     // reads x alpha
  RepairTrace counts;                      // traffic totals, no content
};
/// Throws DecodeFailed when the surviving nodes do not span the lost one.
ProjectionPlan plan_projection(const LinearCode& c, NodeRef failed);
RepairTrace apply_projection(const ProjectionPlan& plan, const Stripe& stripe);

/// Construction-agnostic repair: the newcomer reads its rack's survivors,
/// then asks relayers of the other racks (ascending order) for single
/// stored symbols until the lost columns lie in the span of what it holds.
/// Correct for any code but not bandwidth-optimal.
RepairTrace repair_by_projection(const LinearCode& c, const Stripe& stripe, NodeRef failed);

}  // namespace rrc
