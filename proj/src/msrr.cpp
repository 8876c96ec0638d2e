#include "rrc/msrr.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "rrc/error.hpp"

namespace rrc {

namespace {

using Vec = std::vector<Elem>;

CodeParams params_or_throw(int n, int k, int r, std::optional<int> d, Rational alpha) {
  RawParams raw;
  raw.n = n;
  raw.k = k;
  raw.r = r;
  raw.d = d;
  raw.alpha = std::move(alpha);
  return validate(raw);
}

Vec concat_rack(const Stripe& s, int rack, int per, int from_slot = 0, int to_slot = -1) {
  if (to_slot < 0) to_slot = per;
  Vec out;
  for (int q = from_slot; q < to_slot; ++q) {
    const auto& node = s.at(static_cast<std::size_t>(rack * per + q));
    out.insert(out.end(), node.begin(), node.end());
  }
  return out;
}

Vec row_of(const FieldMatrix& m, std::size_t r) {
  auto sp = m.row_span(r);
  return Vec(sp.begin(), sp.end());
}

FieldMatrix as_col(const Field& f, const Vec& v) { return FieldMatrix::column(f, v); }

FieldMatrix outer(const Field& f, const Vec& a, const Vec& b) {
  MatrixBuilder out(f, a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out.set(i, j, f.mul(a[i], b[j]));
  return std::move(out).build();
}

// M * v for a column vector given as Vec
Vec mat_vec(const FieldMatrix& m, const Vec& v) { return (m * as_col(m.field(), v)).column_values(0); }

Vec axpy(const Field& f, Vec acc, Elem s, const Vec& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = f.add(acc[i], f.mul(s, x[i]));
  return acc;
}

}  // namespace

std::vector<int> systematic_nodes(const CodeParams& p) {
  // data racks first, then the t data slots of rack m: node indices 0..k-1
  std::vector<int> out(static_cast<std::size_t>(p.k));
  for (int i = 0; i < p.k; ++i) out[i] = i;
  return out;
}

// ---- alpha = 1 ----------------------------------------------------------

Alpha1Code build_alpha1(int n, int k, int r, const Field& f) {
  std::optional<int> d;
  if (n > 0 && r > 0 && n % r == 0) d = k * r / n;
  const CodeParams p = params_or_throw(n, k, r, d, 1);
  if (f.modulus() < static_cast<std::uint32_t>(n)) {
    fail(ErrorCode::FieldTooSmall, "a Cauchy MDS generator needs at least n = " +
                                       std::to_string(n) + " field elements");
  }
  std::vector<Elem> xs, ys;
  for (int i = 0; i < k; ++i) xs.push_back(static_cast<Elem>(i));
  for (int i = k; i < n; ++i) ys.push_back(static_cast<Elem>(i));
  const FieldMatrix parts[] = {FieldMatrix::identity(f, static_cast<std::size_t>(k)),
                               cauchy(f, xs, ys)};
  return Alpha1Code{LinearCode{f, p, 1, k, hstack(parts)}};
}

RepairTrace repair_alpha1(const Alpha1Code& c, const Stripe& stripe, NodeRef failed,
                          const std::vector<int>& helpers) {
  const CodeParams& p = c.code.params;
  const Field& f = c.code.field;
  const int per = p.nodes_per_rack();
  if (failed.rack < 0 || failed.rack >= p.r || failed.slot < 0 || failed.slot >= per) {
    fail(ErrorCode::InvalidArgument, "failed node out of range");
  }
  check_helpers(p, failed.rack, helpers);
  auto idx = [per](int rack, int slot) { return rack * per + slot; };
  auto sym = [&](int rack, int slot) { return stripe.at(idx(rack, slot)).at(0); };

  RepairTrace trace;
  trace.helpers = helpers;
  trace.intra_rack_symbols = per - 1;

  // The k-set S: host rack, helpers h_1..h_{d-1}, first t nodes of h_d.
  // With d = 0 the rack alone holds more than k nodes.
  std::vector<int> set;
  int target;
  if (p.d == 0) {
    for (int q = 0; q < per && static_cast<int>(set.size()) < p.k; ++q) {
      if (q != failed.slot) set.push_back(idx(failed.rack, q));
    }
    target = idx(failed.rack, failed.slot);
  } else {
    for (int q = 0; q < per; ++q) set.push_back(idx(failed.rack, q));
    for (int i = 0; i + 1 < p.d; ++i)
      for (int q = 0; q < per; ++q) set.push_back(idx(helpers[i], q));
    const int last = helpers.back();
    for (int q = 0; q < p.t; ++q) set.push_back(idx(last, q));
    target = idx(last, per - 1);
  }
  const FieldMatrix gs = c.code.node_columns(set);
  const Vec q = solve(gs, c.code.generator.column_values(static_cast<std::size_t>(target)));

  if (p.d == 0) {
    Elem v = 0;
    for (std::size_t i = 0; i < set.size(); ++i)
      v = f.add(v, f.mul(q[i], stripe.at(set[i]).at(0)));
    trace.recovered = {v};
    return trace;
  }

  // message from helper rack h_i, i < d: its share of the combination
  std::size_t pos = per;  // q entries of host rack come first
  Elem others = 0;
  for (int i = 0; i + 1 < p.d; ++i) {
    Elem msg = 0;
    for (int s = 0; s < per; ++s) msg = f.add(msg, f.mul(q[pos + s], sym(helpers[i], s)));
    pos += per;
    trace.per_helper[helpers[i]] = 1;
    others = f.add(others, msg);
  }
  // h_d sends its last node minus the t-term
  const int last = helpers.back();
  Elem msg_d = sym(last, per - 1);
  for (int s = 0; s < p.t; ++s) msg_d = f.sub(msg_d, f.mul(q[pos + s], sym(last, s)));
  trace.per_helper[last] = 1;
  trace.cross_rack_symbols = p.d;

  Elem host = f.sub(msg_d, others);  // = sum over host rack of q_j c_j
  for (int s = 0; s < per; ++s) {
    if (s != failed.slot) host = f.sub(host, f.mul(q[s], sym(failed.rack, s)));
  }
  trace.recovered = {f.div(host, q[failed.slot])};
  return trace;
}


// ---- hybrid MSRR ----------------------------------------------------------

namespace {

struct Dims {
  int m, t, per, alpha, A, L, at, B, racks;  // racks = r - m
  int extra() const { return L - at; }      // width of L1
};

Dims dims_of(const CodeParams& p) {
  Dims d{};
  d.m = p.m;
  d.t = p.t;
  d.per = p.nodes_per_rack();
  d.alpha = p.d - p.m + 1;
  d.A = d.alpha * d.per;
  d.L = d.A - d.m;
  d.at = d.alpha * d.t;
  d.B = p.k * d.alpha;
  d.racks = p.r - p.m;
  return d;
}

Vec head(const Vec& v, int n) { return Vec(v.begin(), v.begin() + n); }
Vec tail(const Vec& v, int from) { return Vec(v.begin() + from, v.end()); }
Vec slice(const Vec& v, int from, int len) {
  return Vec(v.begin() + from, v.begin() + from + len);
}

// Left part of the hybrid rack, B x m: block j = u v_j + lambda_j E_j, bottom F
FieldMatrix hybrid_left(const Field& f, const Dims& d, const HybridComponents& c) {
  MatrixBuilder g(f, d.B, d.m);
  const Vec u = row_of(c.u, 0);
  for (int j = 0; j < d.m; ++j) {
    g.place(static_cast<std::size_t>(j * d.A), 0,
            outer(f, u, row_of(c.v, j)) + c.E[j].scaled(c.lambda.at(0, j)));
  }
  g.place(static_cast<std::size_t>(d.m * d.A), 0, c.F);
  return std::move(g).build();
}

// canonical B x A matrix of rack m + i; for the hybrid rack [Left | 0; I | L1]
FieldMatrix rack_matrix(const Field& f, const Dims& d, const HybridComponents& c, int i) {
  if (i > 0) return c.G[i];
  MatrixBuilder g(f, d.B, d.A);
  g.place(0, 0, hybrid_left(f, d, c));
  for (int q = 0; q < d.at; ++q) g.set(static_cast<std::size_t>(d.m * d.A + q), d.m + q, 1);
  if (d.extra() > 0) g.place(0, static_cast<std::size_t>(d.m + d.at), c.L1);
  return std::move(g).build();
}

// columns of G_m held by the coded slots t..per-1 of the hybrid rack: Left and L1
std::vector<std::size_t> hybrid_coded_cols(const Dims& d) {
  std::vector<std::size_t> cols;
  for (int q = 0; q < d.m; ++q) cols.push_back(q);
  for (int q = d.m + d.at; q < d.A; ++q) cols.push_back(q);
  return cols;
}

// s * G_h in canonical column order, read from the rack's nodes and unmixed
Vec rack_view(const Stripe& s, const Dims& d, const HybridComponents& c, int rack) {
  const int i = rack - d.m;
  const FieldMatrix unmix = inverse(c.mix[i]);
  if (i != 0) return vec_mul(concat_rack(s, rack, d.per), unmix);
  const Vec data = concat_rack(s, rack, d.per, 0, d.t);
  const Vec coded = vec_mul(concat_rack(s, rack, d.per, d.t), unmix);
  Vec out(coded.begin(), coded.begin() + d.m);
  out.insert(out.end(), data.begin(), data.end());
  out.insert(out.end(), coded.begin() + d.m, coded.end());
  return out;
}

// repair vector of data rack f applied to a coded rack: [v_f | -y_f]
Vec repair_vector(const Field& f, const HybridComponents& c, int fr) {
  Vec g = row_of(c.v, fr);
  for (Elem e : row_of(c.y, fr)) g.push_back(f.neg(e));
  return g;
}

// Interference vector a data rack j sends for a lost node of rack fr < 0
// means the hybrid-rack repair (W_j).
Vec interference_vector(const Field& f, const Dims& d, const HybridComponents& c, int j,
                        int fr) {
  if (fr >= 0) return mat_vec(c.E[j], row_of(c.v, fr));
  // block j of [Left | L1] a
  const Vec a = row_of(c.a, 0);
  Vec w = slice(mat_vec(hybrid_left(f, d, c), head(a, d.m)), j * d.A, d.A);
  if (d.extra() > 0) {
    const Vec l1 = slice(mat_vec(c.L1, tail(a, d.m)), j * d.A, d.A);
    for (int q = 0; q < d.A; ++q) w[q] = f.add(w[q], l1[q]);
  }
  return w;
}

// Target of G_i * [v_f | -y_f]: blocks j != f are kappa_{i,j} E_j v_f, block f
// the desired vector delta_{i,f}, s_H rows zero.
Vec desired_target(const Field& f, const Dims& d, const HybridComponents& c, int i, int fr) {
  Vec t(static_cast<std::size_t>(d.B), 0);
  for (int j = 0; j < d.m; ++j) {
    const Vec blk = (j == fr) ? c.delta[i].column_values(fr)
                              : axpy(f, Vec(d.A, 0), c.kappa.at(i, j),
                                     interference_vector(f, d, c, j, fr));
    std::copy(blk.begin(), blk.end(), t.begin() + j * d.A);
  }
  return t;
}

// Target of G_i * c_i: blocks mu_{i,j} W_j, s_H rows the M_2 column omega_i.
Vec combiner_target(const Field& f, const Dims& d, const HybridComponents& c, int i) {
  Vec t(static_cast<std::size_t>(d.B), 0);
  for (int j = 0; j < d.m; ++j) {
    const Vec blk = axpy(f, Vec(d.A, 0), c.mu.at(i, j), interference_vector(f, d, c, j, -1));
    std::copy(blk.begin(), blk.end(), t.begin() + j * d.A);
  }
  const Vec om = row_of(c.omega, i);
  std::copy(om.begin(), om.end(), t.begin() + d.m * d.A);
  return t;
}

FieldMatrix m1_matrix(const Field& f, const Dims& d, const HybridComponents& c, int fr) {
  const Vec vf = row_of(c.v, fr);
  Vec row0 = axpy(f, Vec(d.A, 0), dot(f, vf, vf), row_of(c.u, 0));
  row0 = axpy(f, row0, c.lambda.at(0, fr), mat_vec(c.E[fr], vf));
  MatrixBuilder m1(f, d.alpha, d.A);
  for (int i = 0; i < d.alpha; ++i) {
    const Vec row = (i == 0) ? row0 : c.delta[i].column_values(fr);
    for (int col = 0; col < d.A; ++col) m1.set(i, col, row[col]);
  }
  return std::move(m1).build();
}

// alpha t x alpha: column 0 = [F | L1 bottom] a, column i = omega_i
FieldMatrix m2_matrix(const Field& f, const Dims& d, const HybridComponents& c) {
  const Vec a = row_of(c.a, 0);
  Vec col0 = mat_vec(c.F, head(a, d.m));
  if (d.extra() > 0) {
    const Vec l1 = tail(mat_vec(c.L1, tail(a, d.m)), d.m * d.A);
    for (int q = 0; q < d.at; ++q) col0[q] = f.add(col0[q], l1[q]);
  }
  MatrixBuilder out(f, d.at, d.alpha);
  for (int i = 0; i < d.alpha; ++i) {
    const Vec col = (i == 0) ? col0 : row_of(c.omega, i);
    for (int q = 0; q < d.at; ++q) out.set(q, i, col[q]);
  }
  return std::move(out).build();
}

// Rows with pairwise zero products and nonzero self products. Scaled unit
// vectors when `standard`, Gram-Schmidt on random rows otherwise.
std::optional<FieldMatrix> orthogonal_rows(const Field& f, int count, int len, bool standard,
                                           std::mt19937_64& rng) {
  MatrixBuilder out(f, static_cast<std::size_t>(count), static_cast<std::size_t>(len));
  if (standard) {
    for (int q = 0; q < count; ++q) out.set(q, q, f.random_nonzero(rng));
    return std::move(out).build();
  }
  std::vector<Vec> rows;
  for (int q = 0; q < count; ++q) {
    Vec v = row_of(FieldMatrix::random(f, 1, static_cast<std::size_t>(len), rng), 0);
    for (const Vec& g : rows) v = axpy(f, v, f.neg(f.div(dot(f, v, g), dot(f, g, g))), g);
    if (dot(f, v, v) == 0) return std::nullopt;
    for (int c = 0; c < len; ++c) out.set(q, c, v[c]);
    rows.push_back(std::move(v));
  }
  return std::move(out).build();
}

// Overwrites a pivot set of columns of `m` so that m * Y^T = target.
// False when Y lacks full row rank.
bool impose(FieldMatrix& m, const FieldMatrix& y, const FieldMatrix& target) {
  if (y.rows() == 0) return true;
  std::vector<std::size_t> piv, rest;
  for (std::size_t c = 0; c < y.cols(); ++c) {
    if (piv.size() < y.rows()) {
      piv.push_back(c);
      if (rank(y.select_cols(piv)) == piv.size()) continue;
      piv.pop_back();
    }
    rest.push_back(c);
  }
  if (piv.size() != y.rows()) return false;
  FieldMatrix rhs = target;
  if (!rest.empty()) rhs = rhs - m.select_cols(rest) * y.select_cols(rest).transpose();
  const FieldMatrix solved = rhs * inverse(y.select_cols(piv).transpose());
  MatrixBuilder b(std::move(m));
  for (std::size_t q = 0; q < piv.size(); ++q)
    for (std::size_t r = 0; r < solved.rows(); ++r) b.set(r, piv[q], solved.at(r, q));
  m = std::move(b).build();
  return true;
}

std::optional<HybridComponents> draw_components(const Field& f, const Dims& d, bool standard,
                                                std::mt19937_64& rng) {
  const auto sz = [](int v) { return static_cast<std::size_t>(v); };
  auto zero_row0 = [](FieldMatrix m) {
    const std::size_t cols = m.cols();
    MatrixBuilder b(std::move(m));
    for (std::size_t c = 0; c < cols; ++c) b.set(0, c, 0);
    return std::move(b).build();
  };
  auto v = orthogonal_rows(f, d.m, d.m, standard, rng);
  auto y = orthogonal_rows(f, d.m, d.L, standard, rng);
  if (!v || !y) return std::nullopt;
  HybridComponents c{
      std::move(*v),
      std::move(*y),
      FieldMatrix::random(f, 1, sz(d.A), rng),
      FieldMatrix::random_nonzero(f, 1, sz(d.m), rng),
      {},
      FieldMatrix::random(f, sz(d.at), sz(d.m), rng),
      FieldMatrix::random(f, sz(d.B), sz(d.extra()), rng),
      FieldMatrix::random(f, 1, sz(d.m + d.extra()), rng),
      zero_row0(FieldMatrix::random_nonzero(f, sz(d.racks), sz(d.m), rng)),
      {},
      zero_row0(FieldMatrix::random(f, sz(d.racks), sz(d.A), rng)),
      zero_row0(FieldMatrix::random_nonzero(f, sz(d.racks), sz(d.m), rng)),
      zero_row0(FieldMatrix::random(f, sz(d.racks), sz(d.at), rng)),
      {},
      {},
  };
  for (int j = 0; j < d.m; ++j) c.E.push_back(FieldMatrix::random(f, sz(d.A), sz(d.m), rng));
  c.delta.emplace_back(f, sz(d.A), sz(d.m));
  c.G.emplace_back(f, sz(d.B), sz(d.A));
  for (int i = 1; i < d.racks; ++i) {
    c.delta.push_back(FieldMatrix::random(f, sz(d.A), sz(d.m), rng));
  }
  for (int i = 1; i < d.racks; ++i) {
    // generic G_i pinned on m + 1 directions: the repair vectors of the data
    // racks and the combining vector c_i
    MatrixBuilder dirs(f, sz(d.m + 1), sz(d.A));
    MatrixBuilder target(f, sz(d.B), sz(d.m + 1));
    for (int fr = 0; fr <= d.m; ++fr) {
      const Vec g = fr < d.m ? repair_vector(f, c, fr) : row_of(c.c, i);
      const Vec t = fr < d.m ? desired_target(f, d, c, i, fr) : combiner_target(f, d, c, i);
      for (int q = 0; q < d.A; ++q) dirs.set(fr, q, g[q]);
      for (int q = 0; q < d.B; ++q) target.set(q, fr, t[q]);
    }
    FieldMatrix gi = FieldMatrix::random(f, sz(d.B), sz(d.A), rng);
    if (!impose(gi, std::move(dirs).build(), std::move(target).build())) return std::nullopt;
    c.G.push_back(std::move(gi));
  }
  // Intra-rack mixing of the stored columns, so that a partial rack exposes
  // a generic slice of its column space rather than fixed aligned columns.
  for (int i = 0; i < d.racks; ++i) {
    const std::size_t w = sz(i == 0 ? d.A - d.at : d.A);
    FieldMatrix t = FieldMatrix::random(f, w, w, rng);
    if (!is_nonsingular(t)) return std::nullopt;
    c.mix.push_back(std::move(t));
  }
  return c;
}

}  // namespace

bool admissible_hybrid(int n, int k, int r, int d) {
  if (n <= 0 || r <= 0 || n % r != 0 || k < 1 || k >= n) return false;
  const int per = n / r, m = k * r / n, t = k % per;
  if (d < m || d > r - 1 || t == 0) return false;
  const int alpha = d - m + 1;
  return alpha >= 2 && alpha * per >= m + alpha * t;
}

BigInt field_bound_hybrid(const CodeParams& p) {
  if (!admissible_hybrid(p.n, p.k, p.r, p.d)) {
    fail(ErrorCode::NotConstructible,
         "hybrid construction needs t != 0, alpha >= 2 and alpha n/r >= m + alpha t");
  }
  const int alpha = p.d - p.m + 1;
  BigInt sum = 0;
  for (int i = 1; i <= std::min(p.n - p.k, p.k); ++i) {
    sum += BigInt(i) * binomial(p.k, i) * binomial(p.n - p.k, i);
  }
  return alpha * (BigInt(2 * p.nodes_per_rack() + p.t) + sum);
}

LinearCode assemble_hybrid(const CodeParams& p, const Field& f, const HybridComponents& parts) {
  const Dims d = dims_of(p);
  MatrixBuilder g(f, static_cast<std::size_t>(d.B), static_cast<std::size_t>(p.n * d.alpha));
  for (int v = 0; v < p.k; ++v)
    for (int q = 0; q < d.alpha; ++q) g.set(v * d.alpha + q, v * d.alpha + q, 1);
  for (int i = 0; i < d.racks; ++i) {
    FieldMatrix gh = rack_matrix(f, d, parts, i);
    int first_slot = 0;
    if (i == 0) {
      gh = gh.select_cols(hybrid_coded_cols(d));
      first_slot = d.t;
    }
    gh = gh * parts.mix.at(static_cast<std::size_t>(i));
    g.place(0, static_cast<std::size_t>(((d.m + i) * d.per + first_slot) * d.alpha), gh);
  }
  CodeParams q = with_storage(p, d.alpha, 1);
  return LinearCode{f, q, d.alpha, d.B, std::move(g).build()};
}

HybridChecks verify_hybrid(const HybridMsrrCode& c) {
  HybridChecks out;
  const Field& f = c.code.field;
  const Dims d = dims_of(c.code.params);
  const HybridComponents& h = c.parts;

  out.orthogonal = true;
  for (int a = 0; a < d.m; ++a) {
    for (int b = 0; b < d.m; ++b) {
      const Elem vv = dot(f, row_of(h.v, a), row_of(h.v, b));
      const Elem yy = dot(f, row_of(h.y, a), row_of(h.y, b));
      if ((a != b && (vv != 0 || yy != 0)) || (a == b && (vv == 0 || yy == 0))) {
        out.orthogonal = false;
      }
    }
  }

  // desired-symbol and combining identities, recomputed from the matrices
  out.alignment_residuals_zero = true;
  for (int j = 0; j < d.m; ++j) {
    if (h.lambda.at(0, j) == 0) out.alignment_residuals_zero = false;
  }
  for (int i = 1; i < d.racks; ++i) {
    for (int fr = 0; fr < d.m; ++fr) {
      if (mat_vec(h.G[i], repair_vector(f, h, fr)) != desired_target(f, d, h, i, fr)) {
        out.alignment_residuals_zero = false;
      }
    }
    if (mat_vec(h.G[i], row_of(h.c, i)) != combiner_target(f, d, h, i)) {
      out.alignment_residuals_zero = false;
    }
    for (int j = 0; j < d.m; ++j) {
      if (h.kappa.at(i, j) == 0 || h.mu.at(i, j) == 0) out.alignment_residuals_zero = false;
    }
  }

  out.m1_blocks = true;
  for (int fr = 0; fr < d.m && out.m1_blocks; ++fr) {
    const FieldMatrix m1 = m1_matrix(f, d, h, fr);
    for (int s = 0; s < d.per; ++s) {
      if (!is_nonsingular(m1.block(0, d.alpha, static_cast<std::size_t>(s * d.alpha), d.alpha))) {
        out.m1_blocks = false;
        break;
      }
    }
  }
  out.m2_blocks = true;
  const FieldMatrix m2 = m2_matrix(f, d, h);
  for (int s = 0; s < d.t; ++s) {
    if (!is_nonsingular(m2.block(static_cast<std::size_t>(s * d.alpha), d.alpha, 0, d.alpha))) {
      out.m2_blocks = false;
    }
  }
  if (!(out.orthogonal && out.alignment_residuals_zero && out.m1_blocks && out.m2_blocks)) {
    return out;
  }
  out.any_k_rank = check_all_k_subsets(c.code, std::numeric_limits<std::size_t>::max()).ok;
  if (out.any_k_rank) {
    const auto data = systematic_nodes(c.code.params);
    out.systematic_minors = check_systematic_minors(c.code, data);
  }
  return out;
}

bool verify_fault_tolerance(const LinearCode& c) {
  if (!check_all_k_subsets(c, std::numeric_limits<std::size_t>::max()).ok) return false;
  const auto data = systematic_nodes(c.params);
  return check_systematic_minors(c, data);
}

HybridMsrrCode search_hybrid(int n, int k, int r, int d, const Field& f, std::uint64_t seed,
                             int max_attempts) {
  const CodeParams base = params_or_throw(n, k, r, d, 1);
  if (base.t == 0) {
    fail(ErrorCode::HomogeneousUseMsr,
         "kr/n is an integer; use an MSR construction" +
             std::string(base.d == base.m ? " (alpha1 covers d = m)" : ""));
  }
  if (!admissible_hybrid(n, k, r, d)) {
    fail(ErrorCode::NotConstructible, "parameters violate alpha >= 2 or alpha n/r >= m + alpha t");
  }
  const Dims dm = dims_of(base);
  if (dm.L < dm.m) {
    // m orthogonal y_f with nonzero norms are independent, so they need length >= m
    fail(ErrorCode::NotConstructible, "orthogonal y family needs alpha n/r >= 2m");
  }
  std::mt19937_64 rng(seed);
  int pass[6] = {0, 0, 0, 0, 0, 0};
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    // scaled unit vectors first, random orthogonal families for the second half
    const bool standard = attempt <= (max_attempts + 1) / 2;
    std::optional<HybridComponents> parts = draw_components(f, dm, standard, rng);
    if (!parts) continue;
    LinearCode code = assemble_hybrid(base, f, *parts);
    HybridMsrrCode c{std::move(code), std::move(*parts), seed, attempt};
    const HybridChecks chk = verify_hybrid(c);
    const bool flags[6] = {chk.orthogonal, chk.alignment_residuals_zero, chk.m1_blocks,
                           chk.m2_blocks,  chk.any_k_rank,               chk.systematic_minors};
    for (int i = 0; i < 6; ++i) pass[i] += flags[i];
    if (chk.all()) return c;
  }
  std::ostringstream msg;
  msg << "no valid draw in " << max_attempts << " attempts; passes: orthogonal=" << pass[0]
      << " alignment=" << pass[1] << " M1=" << pass[2] << " M2=" << pass[3]
      << " any-k=" << pass[4] << " minors=" << pass[5];
  fail(ErrorCode::SearchFailed, msg.str());
}

std::vector<int> hybrid_helpers(const HybridMsrrCode& c, NodeRef failed) {
  const Dims d = dims_of(c.code.params);
  std::vector<int> out;
  if (failed.rack >= 0 && failed.rack < d.m) {
    for (int j = 0; j < d.m; ++j)
      if (j != failed.rack) out.push_back(j);
    for (int i = 0; i < d.alpha; ++i) out.push_back(d.m + i);
    return out;
  }
  if (failed.rack == d.m && failed.slot >= 0 && failed.slot < d.t) {
    for (int j = 0; j < d.m; ++j) out.push_back(j);
    for (int i = 1; i < d.alpha; ++i) out.push_back(d.m + i);
    return out;
  }
  fail(ErrorCode::UnsupportedRepairTarget,
       "optimal repair covers data nodes only (rack " + std::to_string(failed.rack) + ", slot " +
           std::to_string(failed.slot) + ")");
}

RepairTrace repair_hybrid_data_node(const HybridMsrrCode& c, const Stripe& stripe,
                                    NodeRef failed) {
  const CodeParams& p = c.code.params;
  const Field& f = c.code.field;
  const Dims d = dims_of(p);
  const HybridComponents& h = c.parts;
  if (failed.slot < 0 || failed.slot >= d.per) {
    fail(ErrorCode::InvalidArgument, "failed node out of range");
  }
  RepairTrace trace;
  trace.helpers = hybrid_helpers(c, failed);
  trace.cross_rack_symbols = static_cast<int>(trace.helpers.size());
  trace.intra_rack_symbols = (d.per - 1) * d.alpha;
  for (int hr : trace.helpers) trace.per_helper[hr] = 1;
  const int lost0 = failed.slot * d.alpha;

  if (failed.rack < d.m) {
    const int fr = failed.rack;
    const Vec vf = row_of(h.v, fr);
    std::vector<Elem> w(static_cast<std::size_t>(d.m), 0);
    for (int j = 0; j < d.m; ++j) {
      if (j != fr) w[j] = dot(f, concat_rack(stripe, j, d.per), interference_vector(f, d, h, j, fr));
    }
    Vec q(static_cast<std::size_t>(d.alpha));
    for (int i = 0; i < d.alpha; ++i) {
      const Vec view = rack_view(stripe, d, h, d.m + i);
      Elem z;
      if (i == 0) {
        // hybrid relayer strips its own data part
        const Vec s_h = slice(view, d.m, d.at);
        z = f.sub(dot(f, head(view, d.m), vf), dot(f, s_h, mat_vec(h.F, vf)));
      } else {
        z = dot(f, view, repair_vector(f, h, fr));
      }
      for (int j = 0; j < d.m; ++j) {
        if (j == fr) continue;
        const Elem coef = i == 0 ? h.lambda.at(0, j) : h.kappa.at(i, j);
        z = f.sub(z, f.mul(coef, w[j]));
      }
      q[i] = z;
    }
    // q = s_f M1^T; strip the surviving slots and solve the alpha x alpha block
    const FieldMatrix m1 = m1_matrix(f, d, h, fr);
    const Vec own = concat_rack(stripe, fr, d.per);
    for (int i = 0; i < d.alpha; ++i) {
      for (int col = 0; col < d.A; ++col) {
        if (col >= lost0 && col < lost0 + d.alpha) continue;
        q[i] = f.sub(q[i], f.mul(own[col], m1.at(i, col)));
      }
    }
    trace.recovered = solve(m1.block(0, d.alpha, static_cast<std::size_t>(lost0), d.alpha), q);
    return trace;
  }

  // data node of the hybrid rack: z = s_H M2
  std::vector<Elem> w(static_cast<std::size_t>(d.m));
  for (int j = 0; j < d.m; ++j) {
    w[j] = dot(f, concat_rack(stripe, j, d.per), interference_vector(f, d, h, j, -1));
  }
  Vec z(static_cast<std::size_t>(d.alpha));
  {
    // the newcomer combines its rack's coded columns locally
    const Vec view = rack_view(stripe, d, h, d.m);
    Vec coded = head(view, d.m);
    const Vec rest = tail(view, d.m + d.at);
    coded.insert(coded.end(), rest.begin(), rest.end());
    Elem o = dot(f, coded, row_of(h.a, 0));
    for (int j = 0; j < d.m; ++j) o = f.sub(o, w[j]);
    z[0] = o;
  }
  for (int i = 1; i < d.alpha; ++i) {
    Elem pi = dot(f, rack_view(stripe, d, h, d.m + i), row_of(h.c, i));
    for (int j = 0; j < d.m; ++j) pi = f.sub(pi, f.mul(h.mu.at(i, j), w[j]));
    z[i] = pi;
  }
  const FieldMatrix m2 = m2_matrix(f, d, h);
  const Vec s_h = concat_rack(stripe, d.m, d.per, 0, d.t);
  for (int i = 0; i < d.alpha; ++i) {
    for (int row = 0; row < d.at; ++row) {
      if (row >= lost0 && row < lost0 + d.alpha) continue;
      z[i] = f.sub(z[i], f.mul(s_h[row], m2.at(row, i)));
    }
  }
  trace.recovered =
      solve(m2.block(static_cast<std::size_t>(lost0), d.alpha, 0, d.alpha).transpose(), z);
  return trace;
}

}  // namespace rrc
