#include "rrc/linear_code.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "rrc/error.hpp"

namespace rrc {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::Alpha1: return "alpha1";
    case Family::HybridMsrr: return "hybrid-msrr";
    case Family::Mbrr: return "mbrr";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "alpha1" || name == "1") return Family::Alpha1;
  if (name == "hybrid" || name == "hybrid-msrr" || name == "2") return Family::HybridMsrr;
  if (name == "mbrr" || name == "3") return Family::Mbrr;
  fail(ErrorCode::InvalidArgument, "unknown code family '" + name + "'");
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / i;
  return out;
}

FieldMatrix LinearCode::node_columns(std::span<const int> node_ids) const {
  std::vector<std::size_t> cols;
  cols.reserve(node_ids.size() * static_cast<std::size_t>(alpha));
  for (int v : node_ids) {
    if (v < 0 || v >= nodes()) fail(ErrorCode::InvalidArgument, "node index out of range");
    for (int a = 0; a < alpha; ++a) cols.push_back(static_cast<std::size_t>(v * alpha + a));
  }
  return generator.select_cols(cols);
}

Stripe LinearCode::encode(std::span<const Elem> data) const {
  if (static_cast<int>(data.size()) != file_size) {
    fail(ErrorCode::BadInput, "expected " + std::to_string(file_size) + " data symbols, got " +
                                  std::to_string(data.size()));
  }
  for (Elem e : data) {
    if (e >= field.modulus()) fail(ErrorCode::BadInput, "data symbol outside the field");
  }
  const auto flat = vec_mul(data, generator);
  Stripe out(static_cast<std::size_t>(nodes()));
  for (int v = 0; v < nodes(); ++v) {
    out[v].assign(flat.begin() + v * alpha, flat.begin() + (v + 1) * alpha);
  }
  return out;
}

std::vector<Elem> LinearCode::decode(std::span<const int> node_ids,
                                     std::span<const NodeData> contents) const {
  if (node_ids.size() != contents.size()) {
    fail(ErrorCode::DecodeFailed, "node list and contents differ in length");
  }
  std::vector<Elem> y;
  for (const auto& c : contents) {
    if (static_cast<int>(c.size()) != alpha) fail(ErrorCode::DecodeFailed, "bad node length");
    y.insert(y.end(), c.begin(), c.end());
  }
  // rows are equations: (G_S)^T x = y
  const FieldMatrix eq = node_columns(node_ids).transpose();
  const std::size_t rows = eq.rows();
  const std::size_t cols = eq.cols() + 1;
  std::vector<Elem> a(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy(eq.row_span(r).begin(), eq.row_span(r).end(), a.begin() + r * cols);
    a[r * cols + cols - 1] = y[r];
  }
  const Field& f = field;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c + 1 < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + rank * cols);
    const Elem inv = f.inv(a[rank * cols + c]);
    for (std::size_t j = 0; j < cols; ++j) a[rank * cols + j] = f.mul(a[rank * cols + j], inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const Elem factor = a[r * cols + c];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        a[r * cols + j] = f.sub(a[r * cols + j], f.mul(factor, a[rank * cols + j]));
      }
    }
    pivot_col.push_back(c);
    ++rank;
  }
  if (static_cast<int>(rank) != file_size) {
    fail(ErrorCode::DecodeFailed, "selected nodes span only " + std::to_string(rank) + " of " +
                                      std::to_string(file_size) + " data dimensions");
  }
  for (std::size_t r = rank; r < rows; ++r) {
    if (a[r * cols + cols - 1] != 0) {
      fail(ErrorCode::DecodeFailed, "node contents are mutually inconsistent");
    }
  }
  std::vector<Elem> x(static_cast<std::size_t>(file_size));
  for (std::size_t i = 0; i < rank; ++i) x[pivot_col[i]] = a[i * cols + cols - 1];
  return x;
}

SubsetReport check_all_k_subsets(const LinearCode& c, std::size_t limit, std::uint64_t seed) {
  SubsetReport rep;
  const int n = c.nodes(), k = c.params.k;
  auto test = [&](std::span<const int> idx) {
    ++rep.checked;
    if (static_cast<int>(rank(c.node_columns(idx))) != c.file_size) {
      ++rep.failures;
      rep.ok = false;
    }
  };
  if (binomial(n, k) <= limit) {
    for_each_combination(n, k, [&](std::span<const int> idx) {
      test(idx);
      return true;
    });
    return rep;
  }
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < limit; ++i) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> pick(all.begin(), all.begin() + k);
    std::sort(pick.begin(), pick.end());
    test(pick);
  }
  return rep;
}

bool check_systematic_minors(const LinearCode& c, std::span<const int> data_nodes) {
  const int k = c.params.k, n = c.nodes(), a = c.alpha;
  if (static_cast<int>(data_nodes.size()) != k) return false;
  std::vector<bool> is_data(static_cast<std::size_t>(n), false);
  for (int v : data_nodes) is_data[v] = true;
  std::vector<int> parity;
  for (int v = 0; v < n; ++v) {
    if (!is_data[v]) parity.push_back(v);
  }
  // systematic: data node i carries data symbols [i*alpha, (i+1)*alpha)
  const FieldMatrix identity = FieldMatrix::identity(c.field, static_cast<std::size_t>(a));
  for (int i = 0; i < k; ++i) {
    const int v = data_nodes[i];
    const FieldMatrix cols = c.node_columns(std::span<const int>(&v, 1));
    for (int row = 0; row < c.file_size; ++row) {
      for (int col = 0; col < a; ++col) {
        const Elem want = (row / a == i) ? identity.at(row % a, col) : 0;
        if (cols.at(row, col) != want) return false;
      }
    }
  }
  const FieldMatrix par = c.node_columns(parity);
  const int limit = std::min(k, n - k);
  for (int l = 1; l <= limit; ++l) {
    bool ok = true;
    for_each_combination(k, l, [&](std::span<const int> rows) {
      std::vector<std::size_t> ri;
      for (int r : rows)
        for (int x = 0; x < a; ++x) ri.push_back(static_cast<std::size_t>(r * a + x));
      const FieldMatrix sub_rows = par.select_rows(ri);
      for_each_combination(n - k, l, [&](std::span<const int> cols) {
        std::vector<std::size_t> ci;
        for (int q : cols)
          for (int x = 0; x < a; ++x) ci.push_back(static_cast<std::size_t>(q * a + x));
        ok = is_nonsingular(sub_rows.select_cols(ci));
        return ok;
      });
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

ProjectionPlan plan_projection(const LinearCode& c, NodeRef failed) {
  const int per = c.params.nodes_per_rack(), a = c.alpha;
  if (failed.rack < 0 || failed.rack >= c.params.r || failed.slot < 0 || failed.slot >= per) {
    fail(ErrorCode::InvalidArgument, "failed node out of range");
  }
  ProjectionPlan plan{failed, {}, FieldMatrix(c.field, 0, 0), {}};
  RepairTrace& trace = plan.counts;
  std::vector<std::size_t> cols;  // independent generator columns held
  const std::size_t target0 = static_cast<std::size_t>((failed.rack * per + failed.slot) * a);
  std::vector<std::size_t> target_cols;
  for (int q = 0; q < a; ++q) target_cols.push_back(target0 + q);
  auto complete = [&] {
    std::vector<std::size_t> both = cols;
    both.insert(both.end(), target_cols.begin(), target_cols.end());
    return rank(c.generator.select_cols(both)) == cols.size();
  };
  // returns true when the column was independent and kept
  auto offer = [&](int node, int q) {
    const std::size_t col = static_cast<std::size_t>(node * a + q);
    cols.push_back(col);
    if (rank(c.generator.select_cols(cols)) != cols.size()) {
      cols.pop_back();
      return false;
    }
    plan.reads.emplace_back(node, q);
    return true;
  };
  for (int s = 0; s < per; ++s) {
    if (s == failed.slot) continue;
    trace.intra_rack_symbols += a;
    for (int q = 0; q < a; ++q) offer(failed.rack * per + s, q);
  }
  for (int h = 0; h < c.params.r && !complete(); ++h) {
    if (h == failed.rack) continue;
    int sent = 0;
    for (int s = 0; s < per && !complete(); ++s)
      for (int q = 0; q < a && !complete(); ++q) sent += offer(h * per + s, q);
    if (sent) {
      trace.helpers.push_back(h);
      trace.per_helper[h] = sent;
      trace.cross_rack_symbols += sent;
    }
  }
  if (!complete()) fail(ErrorCode::DecodeFailed, "surviving nodes do not span the lost node");
  // express each lost column in the held basis: K x = g, K full column rank
  const FieldMatrix k = c.generator.select_cols(cols);
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < k.rows() && rows.size() < cols.size(); ++r) {
    rows.push_back(r);
    if (rank(k.select_rows(rows)) != rows.size()) rows.pop_back();
  }
  const FieldMatrix sq = k.select_rows(rows);
  MatrixBuilder comb(c.field, cols.size(), static_cast<std::size_t>(a));
  for (int q = 0; q < a; ++q) {
    const std::size_t tc = target_cols[q];
    const FieldMatrix g = c.generator.select_cols(std::span<const std::size_t>(&tc, 1)).select_rows(rows);
    const std::vector<Elem> x = solve(sq, g.column_values(0));
    for (std::size_t i = 0; i < x.size(); ++i) comb.set(i, q, x[i]);
  }
  plan.combine = std::move(comb).build();
  return plan;
}

RepairTrace apply_projection(const ProjectionPlan& plan, const Stripe& stripe) {
  std::vector<Elem> vals;
  vals.reserve(plan.reads.size());
  for (auto [node, q] : plan.reads) vals.push_back(stripe.at(node).at(q));
  RepairTrace trace = plan.counts;
  trace.recovered = vec_mul(vals, plan.combine);
  return trace;
}

RepairTrace repair_by_projection(const LinearCode& c, const Stripe& stripe, NodeRef failed) {
  return apply_projection(plan_projection(c, failed), stripe);
}

DecodePlan plan_decode(const LinearCode& c, std::span<const int> node_ids) {
  const FieldMatrix cols = c.node_columns(node_ids);
  std::vector<std::size_t> picks;
  for (std::size_t j = 0; j < cols.cols() && static_cast<int>(picks.size()) < c.file_size; ++j) {
    picks.push_back(j);
    if (rank(cols.select_cols(picks)) != picks.size()) picks.pop_back();
  }
  if (static_cast<int>(picks.size()) != c.file_size) {
    fail(ErrorCode::DecodeFailed, "selected nodes span only " + std::to_string(picks.size()) +
                                      " of " + std::to_string(c.file_size) + " data dimensions");
  }
  return DecodePlan{std::vector<int>(node_ids.begin(), node_ids.end()), picks,
                    inverse(cols.select_cols(picks))};
}

std::vector<Elem> apply_decode(const LinearCode& c, const DecodePlan& plan,
                               std::span<const NodeData> contents) {
  if (contents.size() != plan.nodes.size()) {
    fail(ErrorCode::DecodeFailed, "contents do not match the planned node set");
  }
  std::vector<Elem> y;
  y.reserve(plan.picks.size());
  for (std::size_t pos : plan.picks) {
    const auto& node = contents[pos / static_cast<std::size_t>(c.alpha)];
    if (static_cast<int>(node.size()) != c.alpha) fail(ErrorCode::DecodeFailed, "bad node length");
    y.push_back(node[pos % static_cast<std::size_t>(c.alpha)]);
  }
  return vec_mul(y, plan.inverse);
}

}  // namespace rrc
