#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrc/linear_code.hpp"
#include "rrc/rational.hpp"

namespace rrc {

// ---- alpha = 1 ----------------------------------------------------------

/// Systematic [I | Cauchy] MDS code, one symbol per node, d = m.
struct Alpha1Code {
  LinearCode code;
};

/// Throws FieldTooSmall when the field has fewer than n elements.
Alpha1Code build_alpha1(int n, int k, int r, const Field& f);
/// Rebuilds `failed` from the other nodes of its rack and one symbol from
/// each helper rack. Throws InvalidHelpers.
RepairTrace repair_alpha1(const Alpha1Code& c, const Stripe& stripe, NodeRef failed,
                          const std::vector<int>& helpers);

// ---- hybrid MSRR ----------------------------------------------------------

/// Free components of a hybrid code. Index i runs over racks m..r-1
/// (i = 0 is the hybrid rack), j and f over the data racks 0..m-1.
/// A = alpha n/r, L = A - m.
///
/// The hybrid rack keeps the structured form [u v_j + lambda_j E_j ; F]
/// beside [0 ; I | L1]. Coded racks i >= 1 hold a generic B x A matrix G_i
/// pinned on m + 1 directions: G_i [v_f | -y_f] has blocks
/// kappa_{i,j} E_j v_f (j != f), delta_{i,f} (j = f) and zero s_H rows, and
/// G_i c_i has blocks mu_{i,j} W_j over s_H rows omega_i, where W_j is block
/// j of the hybrid rack's combined column [Left | L1] a.
struct HybridComponents {
  FieldMatrix v;       // m x m, row f = v_f
  FieldMatrix y;       // m x L, row f = y_f
  FieldMatrix u;       // 1 x A
  FieldMatrix lambda;  // 1 x m, nonzero
  std::vector<FieldMatrix> E;  // m blocks, A x m
  FieldMatrix F;   // alpha t x m
  FieldMatrix L1;  // B x (L - alpha t)
  FieldMatrix a;   // 1 x (m + L - alpha t), hybrid-rack combining row
  FieldMatrix kappa;               // (r-m) x m, nonzero, row 0 unused
  std::vector<FieldMatrix> delta;  // r-m blocks A x m, column f = desired vector
  FieldMatrix c;                   // (r-m) x A combining rows, row 0 unused
  FieldMatrix mu;                  // (r-m) x m, nonzero, row 0 unused
  FieldMatrix omega;               // (r-m) x alpha t, row 0 unused
  std::vector<FieldMatrix> G;      // r-m blocks B x A, entry 0 unused
  // invertible mixing of each rack's stored columns: A x A, for the hybrid
  // rack (A - alpha t) square over its coded columns
  std::vector<FieldMatrix> mix;
};

struct HybridMsrrCode {
  LinearCode code;
  HybridComponents parts;
  std::uint64_t seed = 0;
  int attempts = 0;  // draws consumed by the search
};

/// alpha (2n/r + t + sum_i i C(k,i) C(n-k,i)) for alpha = d - m + 1.
/// Throws NotConstructible unless admissible_hybrid holds.
BigInt field_bound_hybrid(const CodeParams& p);
/// t != 0, d >= m, alpha >= 2 and alpha n/r >= m + alpha t.
bool admissible_hybrid(int n, int k, int r, int d);

/// Encoding matrices from components (B x n alpha generator).
LinearCode assemble_hybrid(const CodeParams& p, const Field& f, const HybridComponents& parts);

struct HybridChecks {
  bool orthogonal = false;
  bool alignment_residuals_zero = false;  // pinned directions of every G_i
  bool m1_blocks = false;
  bool m2_blocks = false;
  bool any_k_rank = false;
  bool systematic_minors = false;
  bool all() const {
    return orthogonal && alignment_residuals_zero && m1_blocks && m2_blocks && any_k_rank &&
           systematic_minors;
  }
};

/// Exhaustive verification of the repair and fault tolerance conditions.
HybridChecks verify_hybrid(const HybridMsrrCode& c);

/// Throws HomogeneousUseMsr for t = 0, NotConstructible for other
/// inadmissible input (or alpha n/r < 2m, where the y family cannot exist),
/// SearchFailed with per-condition pass rates.
HybridMsrrCode search_hybrid(int n, int k, int r, int d, const Field& f, std::uint64_t seed,
                             int max_attempts = 1000);

/// Rank test over all k-subsets plus the systematic minor enumeration.
bool verify_fault_tolerance(const LinearCode& c);

/// Fixed helper racks: for a data-rack node the other data racks plus racks
/// m..m+alpha-1, for a hybrid-rack data node all data racks plus racks
/// m+1..m+alpha-1. Throws UnsupportedRepairTarget for parity nodes (see
/// repair_by_projection for those).
std::vector<int> hybrid_helpers(const HybridMsrrCode& c, NodeRef failed);
RepairTrace repair_hybrid_data_node(const HybridMsrrCode& c, const Stripe& stripe,
                                    NodeRef failed);

/// The k systematic nodes in data order, for either family's layout.
std::vector<int> systematic_nodes(const CodeParams& p);

}  // namespace rrc
