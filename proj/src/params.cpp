#include "rrc/params.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "rrc/error.hpp"

namespace rrc {

CodeParams validate(const RawParams& raw) {
  if (raw.n <= 0 || raw.r <= 0) {
    fail(ErrorCode::NotMultiple, "n and r must be positive");
  }
  if (raw.n % raw.r != 0) {
    fail(ErrorCode::NotMultiple, "n=" + std::to_string(raw.n) +
                                     " is not a multiple of r=" + std::to_string(raw.r));
  }
  if (raw.k < 1 || raw.k >= raw.n) {
    fail(ErrorCode::ThresholdOutOfRange,
         "need 1 <= k < n, got k=" + std::to_string(raw.k) + " n=" + std::to_string(raw.n));
  }
  const int m = raw.k * raw.r / raw.n;
  const int t = raw.k % (raw.n / raw.r);
  const int d = raw.d.value_or(raw.r - 1);
  if (d < m || d > raw.r - 1) {
    fail(ErrorCode::DegreeOutOfRange, "need m <= d <= r-1, got d=" + std::to_string(d) +
                                          " m=" + std::to_string(m) +
                                          " r=" + std::to_string(raw.r));
  }
  if (raw.alpha <= 0 || raw.beta <= 0) {
    fail(ErrorCode::InvalidArgument, "alpha and beta must be positive");
  }
  CodeParams p{raw.n, raw.k, raw.r, d, raw.alpha, raw.beta, 0, m, t};
  p.file_size = raw.file_size.value_or(capacity(p));
  return p;
}

CodeParams make_params(int n, int k, int r, std::optional<int> d) {
  RawParams raw;
  raw.n = n;
  raw.k = k;
  raw.r = r;
  raw.d = d;
  return validate(raw);
}

CodeParams with_storage(const CodeParams& p, const Rational& alpha, const Rational& beta) {
  RawParams raw{p.n, p.k, p.r, p.d, alpha, beta, std::nullopt};
  return validate(raw);
}

Rational capacity(const CodeParams& p) {
  Rational total = p.k * p.alpha;
  for (int l = 1; l <= p.m; ++l) {
    const Rational term = (p.d - l + 1) * p.beta - p.alpha;
    if (term < 0) total += term;
  }
  return total;
}

RackLayout RackLayout::systematic(const CodeParams& p) {
  std::vector<RackRole> roles(static_cast<std::size_t>(p.r), RackRole::Coded);
  for (int h = 0; h < p.m; ++h) roles[h] = RackRole::Data;
  if (p.t != 0) roles[p.m] = RackRole::Hybrid;
  return RackLayout(p.r, p.nodes_per_rack(), std::move(roles));
}

RackLayout RackLayout::uniform(const CodeParams& p) {
  return RackLayout(p.r, p.nodes_per_rack(),
                    std::vector<RackRole>(static_cast<std::size_t>(p.r), RackRole::Uniform));
}

std::vector<int> RackLayout::rack_nodes(int rack) const {
  std::vector<int> out(per_rack_);
  for (int s = 0; s < per_rack_; ++s) out[s] = rack * per_rack_ + s;
  return out;
}

void check_helpers(const CodeParams& p, int host, const std::vector<int>& helpers) {
  if (static_cast<int>(helpers.size()) != p.d) {
    fail(ErrorCode::InvalidHelpers, "expected " + std::to_string(p.d) + " helper racks, got " +
                                        std::to_string(helpers.size()));
  }
  std::set<int> seen;
  for (int h : helpers) {
    if (h < 0 || h >= p.r) fail(ErrorCode::InvalidHelpers, "helper rack out of range");
    if (h == host) fail(ErrorCode::InvalidHelpers, "helper set contains the host rack");
    if (!seen.insert(h).second) fail(ErrorCode::InvalidHelpers, "helper racks must be distinct");
  }
}

}  // namespace rrc
