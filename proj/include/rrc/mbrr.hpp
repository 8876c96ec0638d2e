#pragma once

#include <cstdint>
#include <vector>

#include "rrc/linear_code.hpp"
#include "rrc/rational.hpp"

namespace rrc {

/// Minimum-bandwidth rack code with beta = 1 and alpha = d symbols per node.
///
/// The data splits into a first part of (k-m)d symbols and a second part of
/// md - m(m-1)/2 symbols. The n - r non-relayer nodes hold, in rack-major
/// order, the first part followed by (n-r-k+m)d global parities data * Q.
/// The second part fills the symmetric message matrix M2 = [S1 S2; S2^T 0];
/// the relayer of rack i stores M2 phi_i + (rack i's non-relayer row) * P_i.
struct MbrrCode {
  LinearCode code;
  FieldMatrix Q;    // B x (n-r-k+m)d
  FieldMatrix Phi;  // d x r, column i = phi_i
  FieldMatrix P;    // (n/r - 1)d x rd, P_i = columns [id, (i+1)d)
  std::uint64_t seed = 0;
  int attempts = 0;
};

int mbrr_file_size(const CodeParams& p);  // kd - m(m-1)/2

/// Generator from the components by encoding unit vectors.
LinearCode assemble_mbrr(const CodeParams& p, const Field& f, const FieldMatrix& Q,
                         const FieldMatrix& Phi, const FieldMatrix& P);

struct MbrrChecks {
  bool phi_any_d = false;  // every d columns of Phi invertible
  bool p_blocks = false;   // every d x d slot block of every P_i invertible
  bool any_k_rank = false;
  bool exhaustive = true;  // any_k_rank came from a full enumeration
  bool all() const { return phi_any_d && p_blocks && any_k_rank; }
};

/// `subset_limit` bounds the exhaustive k-subset enumeration.
MbrrChecks verify_mbrr(const MbrrCode& c, std::size_t subset_limit = 100000);

/// Q is Cauchy when the field has B + (n-r-k+m)d distinct points, random otherwise.
/// Phi starts as Vandermonde on 1..r and turns random after half the
/// attempts. Each attempt refines its draw by single-entry changes that do
/// not increase the number of failing k-subsets. Throws UnsupportedRegime for n - r < k, SearchFailed with
/// per-condition pass counts.
MbrrCode search_mbrr(int n, int k, int r, int d, const Field& f, std::uint64_t seed,
                     int max_attempts = 1000);

/// Structured encoder; equals data * generator.
Stripe mbrr_encode(const MbrrCode& c, std::span<const Elem> data);

/// Any d helper racks. Each helper relayer strips its P-combination and
/// sends phi_f . (M2 phi_h); the newcomer also reads the other n/r - 1 nodes
/// of its rack. Throws InvalidHelpers.
RepairTrace mbrr_repair(const MbrrCode& c, const Stripe& stripe, NodeRef failed,
                        const std::vector<int>& helpers);

/// At least k nodes. Throws DecodeFailed.
std::vector<Elem> mbrr_decode(const MbrrCode& c, std::span<const int> node_ids,
                              std::span<const NodeData> contents);

/// B * sum_{i=1..min(k,r)} C(n-r, k-i) C(r, i).
BigInt field_bound_mbrr(const CodeParams& p);

}  // namespace rrc
