#include "rrc/tradeoff.hpp"

#include <ostream>

#include "rrc/error.hpp"

namespace rrc {

const char* to_string(PointLabel label) noexcept {
  switch (label) {
    case PointLabel::Msrr: return "MSRR";
    case PointLabel::Mbrr: return "MBRR";
    case PointLabel::Msr: return "MSR";
    case PointLabel::Mbr: return "MBR";
    case PointLabel::SohnMs: return "Sohn-MS";
    case PointLabel::SohnMb: return "Sohn-MB";
    case PointLabel::Interior: return "interior";
  }
  return "interior";
}

Rational rrc_breakpoint(const CodeParams& p, int i, const Rational& file_size) {
  return 2 * file_size / Rational(2 * p.k * (p.d - p.m + 1) + i * (2 * p.k - i - 1));
}

Rational rrc_bandwidth_weight(const CodeParams& p, int i) {
  return Rational(i * (2 * p.d - 2 * p.m + i + 1), 2 * p.d);
}

namespace {

Rational mbrr_alpha(const CodeParams& p, const Rational& file_size) {
  // B d / ((k - m) d + m (d - (m - 1) / 2)), kept integral by doubling
  return 2 * file_size * p.d /
         Rational(2 * (p.k - p.m) * p.d + p.m * (2 * p.d - (p.m - 1)));
}

}  // namespace

Rational min_storage(const Rational& beta, const CodeParams& p, const Rational& file_size) {
  if (beta <= 0) fail(ErrorCode::BelowMinimumBandwidth, "beta must be positive");
  const Rational minimum_storage = file_size / p.k;
  if (p.m == 0) return minimum_storage;
  if (beta >= rrc_breakpoint(p, 0, file_size)) return minimum_storage;
  for (int l = 1; l <= p.m - 1; ++l) {
    if (beta >= rrc_breakpoint(p, l, file_size)) {
      return (file_size - rrc_bandwidth_weight(p, l) * p.d * beta) / (p.k - l);
    }
  }
  if (beta == rrc_breakpoint(p, p.m - 1, file_size)) return mbrr_alpha(p, file_size);
  fail(ErrorCode::BelowMinimumBandwidth,
       "beta " + to_exact(beta) + " is below f(m-1) = " +
           to_exact(rrc_breakpoint(p, p.m - 1, file_size)));
}

std::pair<TradeoffPoint, TradeoffPoint> rrc_extreme_points(const CodeParams& p,
                                                           const Rational& file_size) {
  TradeoffPoint msrr{file_size / p.k,
                     file_size * p.d / Rational(p.k * (p.d - p.m + 1)), PointLabel::Msrr};
  const Rational a = mbrr_alpha(p, file_size);
  TradeoffPoint mbrr{a, a, PointLabel::Mbrr};
  return {msrr, mbrr};
}

int rc_degree(const CodeParams& p) noexcept {
  const int per_rack = p.nodes_per_rack();
  return p.d * per_rack + per_rack - 1;
}

namespace {

struct RcCurve {
  int k;
  int d_prime;
  Rational file_size;
  Rational cross_share;  // fraction of the d' helpers outside the host rack

  Rational g(int i) const { return Rational(i * (2 * d_prime - 2 * k + i + 1), 2 * d_prime); }
  Rational f(int i) const {
    return 2 * file_size * d_prime / Rational(2 * k * (d_prime - k + 1) + i * (2 * k - i - 1));
  }
};

RcCurve rc_curve(const CodeParams& p, const Rational& file_size) {
  const int d_prime = rc_degree(p);
  if (d_prime < p.k) {
    fail(ErrorCode::InvalidArgument, "RC degree d'=" + std::to_string(d_prime) + " is below k");
  }
  return {p.k, d_prime, file_size, Rational(p.d * p.nodes_per_rack(), d_prime)};
}

}  // namespace

Rational rc_min_storage(const Rational& gamma_prime, const CodeParams& p,
                        const Rational& file_size) {
  const RcCurve c = rc_curve(p, file_size);
  // work with the total repair bandwidth d' beta'; only the cross-rack share
  // of it is gamma'
  const Rational total = gamma_prime / c.cross_share;
  if (total >= c.f(0)) return file_size / p.k;
  for (int i = 1; i <= p.k - 1; ++i) {
    if (total >= c.f(i)) return (file_size - c.g(i) * total) / (p.k - i);
  }
  fail(ErrorCode::BelowMinimumBandwidth,
       "gamma' " + to_exact(gamma_prime) + " is below the MBR point");
}

std::pair<Rational, Rational> rc_extreme_gammas(const CodeParams& p, const Rational& file_size) {
  const RcCurve c = rc_curve(p, file_size);
  return {c.cross_share * c.f(0), c.cross_share * c.f(p.k - 1)};
}

std::pair<TradeoffPoint, TradeoffPoint> rc_extreme_points(const CodeParams& p,
                                                          const Rational& file_size) {
  const auto [msr, mbr] = rc_extreme_gammas(p, file_size);
  return {TradeoffPoint{file_size / p.k, msr, PointLabel::Msr},
          TradeoffPoint{rc_min_storage(mbr, p, file_size), mbr, PointLabel::Mbr}};
}

RelatedPoints related_points(int n, int k, int r, const Rational& epsilon,
                             const Rational& file_size) {
  if (epsilon <= 0) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (k >= n || n % r != 0) fail(ErrorCode::InvalidArgument, "need n > k and r | n");
  const int per_rack = n / r;
  const int m = k * r / n;
  const int t = k % per_rack;
  const Rational ms_alpha = file_size / k;
  TradeoffPoint ms{ms_alpha, ms_alpha * Rational(n - per_rack, n - k), PointLabel::SohnMs};
  const Rational mb_alpha = Rational(per_rack - 1) / epsilon + (n - per_rack);
  TradeoffPoint mb{mb_alpha, Rational(n - per_rack), PointLabel::SohnMb};
  const Rational mb_file = k * mb_alpha -
                           Rational(1, 2) * (1 / epsilon - 1) *
                               Rational(m * per_rack * per_rack + t * t - k) -
                           Rational(k * (k - 1), 2);
  return {ms, mb, mb_file};
}

std::vector<int> mbrr_high_rate_range(int r, int n) {
  if (r <= 0 || n % r != 0) fail(ErrorCode::NotMultiple, "n must be a multiple of r");
  const int d = r - 1;
  std::vector<int> ks;
  for (int k = 1; k < n; ++k) {
    const int m = k * r / n;
    // (kd - m(m-1)/2) / (nd) > 1/2  <=>  2kd - m(m-1) > nd
    if (2 * k * d - m * (m - 1) > n * d) ks.push_back(k);
  }
  return ks;
}

std::vector<CurveRow> tradeoff_rows(const CodeParams& p, const Rational& file_size, int steps) {
  std::vector<CurveRow> rows;
  auto emit = [&](const char* family, const Rational& alpha, const Rational& gamma) {
    rows.push_back({family, p.n, p.k, p.r, p.d, file_size, alpha, gamma});
  };

  // rack-aware curve, from the MBRR end up to twice the MSRR bandwidth
  std::vector<Rational> betas;
  if (p.d == 0) {
    // no helper racks: repair is rack-local and the curve is a single point
    emit("rrc", file_size / p.k, Rational(0));
  } else if (p.m == 0) {
    betas.push_back(rrc_extreme_points(p, file_size).first.gamma / p.d);
  } else {
    for (int l = p.m - 1; l >= 0; --l) betas.push_back(rrc_breakpoint(p, l, file_size));
  }
  if (!betas.empty()) betas.push_back(2 * betas.back());
  for (std::size_t s = 0; s < betas.size(); ++s) {
    emit("rrc", min_storage(betas[s], p, file_size), p.d * betas[s]);
    if (s + 1 == betas.size()) break;
    for (int j = 1; j <= steps; ++j) {
      const Rational beta = betas[s] + (betas[s + 1] - betas[s]) * Rational(j, steps + 1);
      emit("rrc", min_storage(beta, p, file_size), p.d * beta);
    }
  }

  if (p.d > 0 && rc_degree(p) >= p.k) {
    const Rational msr = rc_extreme_gammas(p, file_size).first;
    const RcCurve c = rc_curve(p, file_size);
    std::vector<Rational> gammas;
    for (int i = p.k - 1; i >= 0; --i) gammas.push_back(c.cross_share * c.f(i));
    gammas.push_back(2 * msr);
    for (std::size_t s = 0; s < gammas.size(); ++s) {
      emit("rc", rc_min_storage(gammas[s], p, file_size), gammas[s]);
      if (s + 1 == gammas.size()) break;
      for (int j = 1; j <= steps; ++j) {
        const Rational g = gammas[s] + (gammas[s + 1] - gammas[s]) * Rational(j, steps + 1);
        emit("rc", rc_min_storage(g, p, file_size), g);
      }
    }
  }

  const RelatedPoints rel = related_points(p.n, p.k, p.r, 1, file_size);
  emit("sohn", rel.sohn_ms.alpha, rel.sohn_ms.gamma);
  if (rel.sohn_mb_file_size > 0) {
    const Rational scale = file_size / rel.sohn_mb_file_size;
    emit("sohn", rel.sohn_mb.alpha * scale, rel.sohn_mb.gamma * scale);
  }
  return rows;
}

void write_tradeoff_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "family,n,k,r,d,B,alpha_exact,gamma_exact,alpha_dec,gamma_dec\n";
  for (const auto& row : rows) {
    out << row.family << ',' << row.n << ',' << row.k << ',' << row.r << ',' << row.d << ','
        << to_exact(row.file_size) << ',' << to_exact(row.alpha) << ',' << to_exact(row.gamma)
        << ',' << to_decimal(row.alpha) << ',' << to_decimal(row.gamma) << '\n';
  }
}

}  // namespace rrc
