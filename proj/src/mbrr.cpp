#include "rrc/mbrr.hpp"

#include <numeric>
#include <utility>
#include <sstream>

#include "rrc/error.hpp"

namespace rrc {
namespace {

struct Shape {
  int n, k, r, d, m, per, first, second, global, row;
  // first = (k-m)d data symbols in non-relayers, row = (per-1)d per rack
};

Shape shape_of(const CodeParams& p) {
  const int per = p.nodes_per_rack();
  const int first = (p.k - p.m) * p.d;
  return {p.n, p.k, p.r, p.d, p.m, per, first, mbrr_file_size(p) - first,
          (p.n - p.r - p.k + p.m) * p.d, (per - 1) * p.d};
}

CodeParams mbrr_params(int n, int k, int r, std::optional<int> d) {
  RawParams raw;
  raw.n = n;
  raw.k = k;
  raw.r = r;
  raw.d = d;
  const CodeParams p = validate(raw);
  if (p.d < 1) fail(ErrorCode::DegreeOutOfRange, "minimum-bandwidth codes need d >= 1");
  if (p.n - p.r < p.k) {
    fail(ErrorCode::UnsupportedRegime, "need n - r >= k, got n=" + std::to_string(n) +
                                           " r=" + std::to_string(r) + " k=" + std::to_string(k));
  }
  return p;
}

// M2 from the second data part: S1 upper triangle row by row, then S2.
FieldMatrix message_matrix(const Field& f, const Shape& s, std::span<const Elem> second) {
  MatrixBuilder m2(f, static_cast<std::size_t>(s.d), static_cast<std::size_t>(s.d));
  std::size_t at = 0;
  for (int a = 0; a < s.m; ++a)
    for (int b = a; b < s.m; ++b) {
      m2.set(a, b, second[at]);
      m2.set(b, a, second[at]);
      ++at;
    }
  for (int a = 0; a < s.m; ++a)
    for (int b = s.m; b < s.d; ++b) {
      m2.set(a, b, second[at]);
      m2.set(b, a, second[at]);
      ++at;
    }
  return std::move(m2).build();
}

FieldMatrix p_block(const Shape& s, const FieldMatrix& P, int rack) {
  return P.block(0, static_cast<std::size_t>(s.row), static_cast<std::size_t>(rack * s.d),
                 static_cast<std::size_t>(s.d));
}

// rows of P_i that multiply slot `slot` (>= 1) of the rack
FieldMatrix slot_block(const Shape& s, const FieldMatrix& P, int rack, int slot) {
  return P.block(static_cast<std::size_t>((slot - 1) * s.d), static_cast<std::size_t>(s.d),
                 static_cast<std::size_t>(rack * s.d), static_cast<std::size_t>(s.d));
}

std::vector<Elem> phi_col(const FieldMatrix& Phi, int rack) {
  return Phi.column_values(static_cast<std::size_t>(rack));
}

std::vector<Elem> add_vec(const Field& f, std::vector<Elem> a, std::span<const Elem> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], b[i]);
  return a;
}

std::vector<Elem> sub_vec(const Field& f, std::vector<Elem> a, std::span<const Elem> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.sub(a[i], b[i]);
  return a;
}

// full non-relayer row of a rack from the stripe
std::vector<Elem> rack_row(const Shape& s, const Stripe& stripe, int rack) {
  std::vector<Elem> row;
  row.reserve(static_cast<std::size_t>(s.row));
  for (int slot = 1; slot < s.per; ++slot) {
    const auto& node = stripe.at(static_cast<std::size_t>(rack * s.per + slot));
    row.insert(row.end(), node.begin(), node.end());
  }
  return row;
}

Stripe encode_parts(const Field& f, const Shape& s, const FieldMatrix& Q, const FieldMatrix& Phi,
                    const FieldMatrix& P, std::span<const Elem> data) {
  std::vector<Elem> m1(data.begin(), data.begin() + s.first);
  if (s.global > 0) {
    const auto g = vec_mul(data, Q);
    m1.insert(m1.end(), g.begin(), g.end());
  }
  const FieldMatrix m2 = message_matrix(f, s, data.subspan(static_cast<std::size_t>(s.first)));
  Stripe out(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.r; ++i) {
    const std::span<const Elem> row(m1.data() + i * s.row, static_cast<std::size_t>(s.row));
    for (int slot = 1; slot < s.per; ++slot) {
      out[i * s.per + slot].assign(row.begin() + (slot - 1) * s.d, row.begin() + slot * s.d);
    }
    const auto phi = phi_col(Phi, i);
    out[i * s.per] = add_vec(f, (m2 * FieldMatrix::column(f, phi)).column_values(0),
                             vec_mul(row, p_block(s, P, i)));
  }
  return out;
}

bool phi_any_d(const Shape& s, const FieldMatrix& Phi) {
  bool ok = true;
  for_each_combination(s.r, s.d, [&](std::span<const int> cols) {
    std::vector<std::size_t> idx(cols.begin(), cols.end());
    ok = is_nonsingular(Phi.select_cols(idx));
    return ok;
  });
  return ok;
}

constexpr int kRefineSteps = 3000;

// rank-deficient k-subsets, stopping once `cap` (>= 0) is exceeded
int count_failures(const LinearCode& code, int cap) {
  const int n = code.nodes(), k = code.params.k;
  if (binomial(n, k) > 100000) return static_cast<int>(check_all_k_subsets(code).failures);
  int bad = 0;
  for_each_combination(n, k, [&](std::span<const int> idx) {
    if (static_cast<int>(rank(code.node_columns(idx))) != code.file_size) ++bad;
    return cap < 0 || bad <= cap;
  });
  return bad;
}

bool p_blocks_ok(const Shape& s, const FieldMatrix& P) {
  for (int i = 0; i < s.r; ++i)
    for (int slot = 1; slot < s.per; ++slot)
      if (!is_nonsingular(slot_block(s, P, i, slot))) return false;
  return true;
}

}  // namespace

int mbrr_file_size(const CodeParams& p) { return p.k * p.d - p.m * (p.m - 1) / 2; }

LinearCode assemble_mbrr(const CodeParams& p, const Field& f, const FieldMatrix& Q,
                         const FieldMatrix& Phi, const FieldMatrix& P) {
  const Shape s = shape_of(p);
  const int B = mbrr_file_size(p);
  if (Q.rows() != static_cast<std::size_t>(B) ||
      Q.cols() != static_cast<std::size_t>(s.global) || Phi.rows() != static_cast<std::size_t>(s.d) ||
      Phi.cols() != static_cast<std::size_t>(s.r) || P.rows() != static_cast<std::size_t>(s.row) ||
      P.cols() != static_cast<std::size_t>(s.r * s.d)) {
    fail(ErrorCode::InvalidArgument, "component shapes do not match the parameters");
  }
  MatrixBuilder g(f, static_cast<std::size_t>(B), static_cast<std::size_t>(s.n * s.d));
  std::vector<Elem> unit(static_cast<std::size_t>(B), 0);
  for (int b = 0; b < B; ++b) {
    unit[b] = 1;
    const Stripe st = encode_parts(f, s, Q, Phi, P, unit);
    unit[b] = 0;
    for (int v = 0; v < s.n; ++v)
      for (int q = 0; q < s.d; ++q) g.set(b, v * s.d + q, st[v][q]);
  }
  return LinearCode{f, p, s.d, B, std::move(g).build()};
}

MbrrChecks verify_mbrr(const MbrrCode& c, std::size_t subset_limit) {
  const Shape s = shape_of(c.code.params);
  MbrrChecks chk;
  chk.phi_any_d = phi_any_d(s, c.Phi);
  chk.p_blocks = p_blocks_ok(s, c.P);
  const SubsetReport rep = check_all_k_subsets(c.code, subset_limit);
  chk.any_k_rank = rep.ok;
  chk.exhaustive = rep.exhaustive;
  return chk;
}

MbrrCode search_mbrr(int n, int k, int r, int d, const Field& f, std::uint64_t seed,
                     int max_attempts) {
  const CodeParams p = mbrr_params(n, k, r, d);
  const Shape s = shape_of(p);
  std::mt19937_64 rng(seed);

  // Cauchy on 2 disjoint point sets when the field is big enough
  std::optional<FieldMatrix> cauchy_q;
  const int B = mbrr_file_size(p);
  if (s.global > 0 && static_cast<std::uint64_t>(B + s.global) <= f.modulus()) {
    std::vector<Elem> xs(static_cast<std::size_t>(B)), ys(static_cast<std::size_t>(s.global));
    std::iota(xs.begin(), xs.end(), Elem{0});
    std::iota(ys.begin(), ys.end(), static_cast<Elem>(B));
    cauchy_q = cauchy(f, xs, ys);
  }
  std::optional<FieldMatrix> vander_phi;
  if (static_cast<std::uint64_t>(s.r) < f.modulus()) {
    std::vector<Elem> pts(static_cast<std::size_t>(s.r));
    std::iota(pts.begin(), pts.end(), Elem{1});
    vander_phi = vandermonde(f, static_cast<std::size_t>(s.d), pts);
  }

  // A fresh draw rarely passes over tiny fields (GF(11) leaves ~15 of 495
  // subsets rank deficient), so each attempt also refines the draw: change
  // one entry of P (or of a random Q) and keep it unless more subsets fail.
  const bool q_free = !cauchy_q && s.global > 0;
  int pass[3] = {0, 0, 0};
  int closest = -1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    MbrrCode c{LinearCode{f, p, s.d, 0, FieldMatrix(f, 0, 0)},
               cauchy_q ? *cauchy_q
                        : FieldMatrix::random_nonzero(f, static_cast<std::size_t>(B),
                                                      static_cast<std::size_t>(s.global), rng),
               (vander_phi && 2 * attempt <= max_attempts)
                   ? *vander_phi
                   : FieldMatrix::random_nonzero(f, static_cast<std::size_t>(s.d),
                                                 static_cast<std::size_t>(s.r), rng),
               FieldMatrix::random_nonzero(f, static_cast<std::size_t>(s.row),
                                           static_cast<std::size_t>(s.r * s.d), rng),
               seed, attempt};
    const bool phi_ok = phi_any_d(s, c.Phi), p_ok = p_blocks_ok(s, c.P);
    pass[0] += phi_ok;
    pass[1] += p_ok;
    if (!phi_ok || !p_ok) continue;
    c.code = assemble_mbrr(p, f, c.Q, c.Phi, c.P);
    int bad = count_failures(c.code, -1);
    for (int step = 0; bad > 0 && step < kRefineSteps; ++step) {
      const bool on_q = q_free && (rng() & 1);
      FieldMatrix& target = on_q ? c.Q : c.P;
      MatrixBuilder b(target);
      b.set(rng() % target.rows(), rng() % target.cols(), f.random_nonzero(rng));
      FieldMatrix old = std::exchange(target, std::move(b).build());
      if (!on_q && !p_blocks_ok(s, c.P)) {
        target = std::move(old);
        continue;
      }
      LinearCode trial = assemble_mbrr(p, f, c.Q, c.Phi, c.P);
      const int now = count_failures(trial, bad);
      if (now <= bad) {
        bad = now;
        c.code = std::move(trial);
      } else {
        target = std::move(old);
      }
    }
    if (closest < 0 || bad < closest) closest = bad;
    pass[2] += bad == 0;
    if (bad == 0) return c;
  }
  std::ostringstream msg;
  msg << "no valid draw in " << max_attempts << " attempts; passes: phi=" << pass[0]
      << " P-blocks=" << pass[1] << " any-k=" << pass[2]
      << "; fewest failing subsets " << closest;
  fail(ErrorCode::SearchFailed, msg.str());
}

Stripe mbrr_encode(const MbrrCode& c, std::span<const Elem> data) {
  if (static_cast<int>(data.size()) != c.code.file_size) {
    fail(ErrorCode::BadInput, "expected " + std::to_string(c.code.file_size) +
                                  " data symbols, got " + std::to_string(data.size()));
  }
  for (Elem e : data) {
    if (e >= c.code.field.modulus()) fail(ErrorCode::BadInput, "data symbol outside the field");
  }
  return encode_parts(c.code.field, shape_of(c.code.params), c.Q, c.Phi, c.P, data);
}

RepairTrace mbrr_repair(const MbrrCode& c, const Stripe& stripe, NodeRef failed,
                        const std::vector<int>& helpers) {
  const CodeParams& p = c.code.params;
  const Field& f = c.code.field;
  const Shape s = shape_of(p);
  if (failed.rack < 0 || failed.rack >= s.r || failed.slot < 0 || failed.slot >= s.per) {
    fail(ErrorCode::InvalidArgument, "failed node out of range");
  }
  check_helpers(p, failed.rack, helpers);
  RepairTrace trace;
  trace.helpers = helpers;
  const auto phi_f = phi_col(c.Phi, failed.rack);

  // each helper relayer: M2 phi_h = own content - row_h P_h, then project on phi_f
  std::vector<Elem> sent;
  std::vector<std::size_t> cols;
  for (int h : helpers) {
    const auto row = rack_row(s, stripe, h);
    const auto local = sub_vec(f, stripe.at(static_cast<std::size_t>(h * s.per)),
                               vec_mul(row, p_block(s, c.P, h)));
    sent.push_back(dot(f, phi_f, local));
    cols.push_back(static_cast<std::size_t>(h));
    trace.per_helper[h] = 1;
    ++trace.cross_rack_symbols;
  }
  // sent = (M2 phi_f)^T Phi_H, M2 symmetric
  const std::vector<Elem> m2phi = solve(c.Phi.select_cols(cols).transpose(), sent);

  trace.intra_rack_symbols = (s.per - 1) * s.d;
  if (failed.slot == 0) {
    const auto row = rack_row(s, stripe, failed.rack);
    trace.recovered = add_vec(f, m2phi, vec_mul(row, p_block(s, c.P, failed.rack)));
    return trace;
  }
  // relayer content - M2 phi_f = sum over slots of segment * slot block
  auto rest = sub_vec(f, stripe.at(static_cast<std::size_t>(failed.rack * s.per)), m2phi);
  for (int slot = 1; slot < s.per; ++slot) {
    if (slot == failed.slot) continue;
    const auto& seg = stripe.at(static_cast<std::size_t>(failed.rack * s.per + slot));
    rest = sub_vec(f, std::move(rest), vec_mul(seg, slot_block(s, c.P, failed.rack, slot)));
  }
  trace.recovered = solve(slot_block(s, c.P, failed.rack, failed.slot).transpose(), rest);
  return trace;
}

std::vector<Elem> mbrr_decode(const MbrrCode& c, std::span<const int> node_ids,
                              std::span<const NodeData> contents) {
  if (static_cast<int>(node_ids.size()) < c.code.params.k) {
    fail(ErrorCode::DecodeFailed, "decoding needs at least k nodes");
  }
  return c.code.decode(node_ids, contents);
}

BigInt field_bound_mbrr(const CodeParams& p) {
  BigInt sum = 0;
  for (int i = 1; i <= std::min(p.k, p.r); ++i) {
    sum += BigInt(binomial(p.n - p.r, p.k - i)) * binomial(p.r, i);
  }
  return mbrr_file_size(p) * sum;
}

}  // namespace rrc
