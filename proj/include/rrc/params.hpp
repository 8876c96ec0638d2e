#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rrc/rational.hpp"

namespace rrc {

/// Unvalidated user input. `d` defaults to r - 1; `file_size` defaults to
/// the capacity at (alpha, beta).
struct RawParams {
  int n = 0;
  int k = 0;
  int r = 0;
  std::optional<int> d;
  Rational alpha = 1;
  Rational beta = 1;
  std::optional<Rational> file_size;
};

/// Validated rack-aware code parameters. Construct through validate().
struct CodeParams {
  int n;
  int k;
  int r;
  int d;
  Rational alpha;
  Rational beta;
  Rational file_size;
  int m;  // floor(k r / n)
  int t;  // k mod (n / r)

  int nodes_per_rack() const noexcept { return n / r; }
};

/// Throws NotMultiple, ThresholdOutOfRange or DegreeOutOfRange naming the
/// violated constraint.
CodeParams validate(const RawParams& raw);

/// Convenience for the common integer case with alpha = beta = 1.
CodeParams make_params(int n, int k, int r, std::optional<int> d = std::nullopt);
CodeParams with_storage(const CodeParams& p, const Rational& alpha,
                        const Rational& beta);

/// k alpha + sum_{l=1..m} min{(d - l + 1) beta - alpha, 0}.
Rational capacity(const CodeParams& p);

struct NodeRef {
  int rack;  // 0-based
  int slot;  // 0-based, slot 0 is the relayer
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

enum class RackRole { Data, Hybrid, Coded, Uniform };

/// Placement of the n nodes into r racks of n/r slots. Node index
/// = rack * (n/r) + slot. Slot 0 of every rack is the relayer.
class RackLayout {
 public:
  /// First m racks data, rack m hybrid iff t != 0, the rest coded.
  static RackLayout systematic(const CodeParams& p);
  /// Every rack has the same role (no systematic racks).
  static RackLayout uniform(const CodeParams& p);

  int nodes() const noexcept { return racks_ * per_rack_; }
  int racks() const noexcept { return racks_; }
  int nodes_per_rack() const noexcept { return per_rack_; }
  int rack_of(int node) const noexcept { return node / per_rack_; }
  int slot_of(int node) const noexcept { return node % per_rack_; }
  int node_index(NodeRef ref) const noexcept { return ref.rack * per_rack_ + ref.slot; }
  NodeRef ref(int node) const noexcept { return {rack_of(node), slot_of(node)}; }
  int relayer(int rack) const noexcept { return rack * per_rack_; }
  RackRole role(int rack) const { return roles_.at(static_cast<std::size_t>(rack)); }
  std::vector<int> rack_nodes(int rack) const;

 private:
  RackLayout(int racks, int per_rack, std::vector<RackRole> roles)
      : racks_(racks), per_rack_(per_rack), roles_(std::move(roles)) {}
  int racks_;
  int per_rack_;
  std::vector<RackRole> roles_;
};

/// Throws InvalidHelpers unless `helpers` are `d` distinct racks in range,
/// none equal to `host`.
void check_helpers(const CodeParams& p, int host, const std::vector<int>& helpers);

}  // namespace rrc
