#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rrc/params.hpp"
#include "rrc/rational.hpp"

namespace rrc {

enum class PointLabel { Msrr, Mbrr, Msr, Mbr, SohnMs, SohnMb, Interior };

const char* to_string(PointLabel label) noexcept;

/// Storage per node and cross-rack repair bandwidth, both in symbols for a
/// file of the stated size.
struct TradeoffPoint {
  Rational alpha;
  Rational gamma;
  PointLabel label = PointLabel::Interior;
};

// Rack-aware curve. Only (n, k, r, d, m) of `p` are used; the file size is
// passed explicitly and defaults to the normalized B = 1.

/// Breakpoint beta values f(i) = 2B / (2k(d-m+1) + i(2k-i-1)).
Rational rrc_breakpoint(const CodeParams& p, int i, const Rational& file_size = 1);
/// g(i) = i (2d - 2m + i + 1) / (2d).
Rational rrc_bandwidth_weight(const CodeParams& p, int i);

/// Minimum per-node storage for helper bandwidth beta. Throws
/// BelowMinimumBandwidth for beta < f(m-1).
Rational min_storage(const Rational& beta, const CodeParams& p,
                     const Rational& file_size = 1);

std::pair<TradeoffPoint, TradeoffPoint> rrc_extreme_points(const CodeParams& p,
                                                           const Rational& file_size = 1);

// Regenerating code RC(n, k, d') deployed on racks with d' = dn/r + n/r - 1.

int rc_degree(const CodeParams& p) noexcept;
/// Minimum storage for cross-rack bandwidth gamma'. Throws
/// BelowMinimumBandwidth below the MBR point, InvalidArgument when d' < k.
Rational rc_min_storage(const Rational& gamma_prime, const CodeParams& p,
                        const Rational& file_size = 1);
/// (gamma'_MSR, gamma'_MBR).
std::pair<Rational, Rational> rc_extreme_gammas(const CodeParams& p,
                                                const Rational& file_size = 1);
std::pair<TradeoffPoint, TradeoffPoint> rc_extreme_points(const CodeParams& p,
                                                          const Rational& file_size = 1);

struct RelatedPoints {
  TradeoffPoint sohn_ms;      // for the given file size
  TradeoffPoint sohn_mb;      // unnormalized, cross-rack download 1 per helper
  Rational sohn_mb_file_size;  // file size carried by sohn_mb
};

/// Minimum-storage and minimum-bandwidth points of the clustered codes with
/// intra/cross bandwidth ratio epsilon.
RelatedPoints related_points(int n, int k, int r, const Rational& epsilon,
                             const Rational& file_size = 1);

/// All k in [1, n-1] for which the MBRR code rate exceeds 1/2 at d = r - 1.
std::vector<int> mbrr_high_rate_range(int r, int n);

/// One line of the trade-off CSV.
struct CurveRow {
  std::string family;  // rrc, rc or sohn
  int n, k, r, d;
  Rational file_size;
  Rational alpha;
  Rational gamma;
};

/// Sweeps the rack-aware curve, the RC curve and the related points.
/// `steps` points are placed inside every segment between breakpoints.
std::vector<CurveRow> tradeoff_rows(const CodeParams& p, const Rational& file_size = 1,
                                    int steps = 4);
void write_tradeoff_csv(std::ostream& out, const std::vector<CurveRow>& rows);

}  // namespace rrc
