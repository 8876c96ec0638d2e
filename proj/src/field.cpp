#include "rrc/field.hpp"

#include <algorithm>
#include <string>

#include "rrc/error.hpp"

namespace rrc {

bool is_prime(std::uint64_t v) noexcept {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (std::uint64_t d = 3; d * d <= v; d += 2) {
    if (v % d == 0) return false;
  }
  return true;
}

Field::Field(std::uint32_t modulus) : p_(modulus) {
  if (modulus >= (1u << 31) || !is_prime(modulus)) {
    fail(ErrorCode::InvalidArgument,
         "field modulus " + std::to_string(modulus) + " is not a prime below 2^31");
  }
}

Elem Field::pow(Elem base, std::uint64_t exp) const noexcept {
  Elem result = 1 % p_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

Elem Field::inv(Elem a) const {
  if (a % p_ == 0) fail(ErrorCode::NonInvertible, "zero has no inverse");
  // extended Euclid on (a, p)
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p_, new_r = a;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p_;
  return static_cast<Elem>(t);
}

Elem Field::from_int(std::int64_t v) const noexcept {
  std::int64_t m = v % static_cast<std::int64_t>(p_);
  if (m < 0) m += p_;
  return static_cast<Elem>(m);
}

Elem Field::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint32_t> dist(0, p_ - 1);
  return dist(rng);
}

Elem Field::random_nonzero(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint32_t> dist(1, p_ - 1);
  return dist(rng);
}

FieldMatrix::FieldMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(Field field, std::size_t rows, std::size_t cols,
                         std::vector<Elem> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    fail(ErrorCode::InvalidArgument, "matrix entry count does not match shape");
  }
  for (Elem e : data_) {
    if (e >= field_.modulus()) {
      fail(ErrorCode::InvalidArgument, "matrix entry outside the field");
    }
  }
}

FieldMatrix FieldMatrix::identity(Field field, std::size_t n) {
  FieldMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

FieldMatrix FieldMatrix::random(Field field, std::size_t rows, std::size_t cols,
                                std::mt19937_64& rng) {
  FieldMatrix m(field, rows, cols);
  for (auto& e : m.data_) e = field.random(rng);
  return m;
}

FieldMatrix FieldMatrix::random_nonzero(Field field, std::size_t rows,
                                        std::size_t cols, std::mt19937_64& rng) {
  FieldMatrix m(field, rows, cols);
  for (auto& e : m.data_) e = field.random_nonzero(rng);
  return m;
}

FieldMatrix FieldMatrix::column(Field field, std::span<const Elem> values) {
  return FieldMatrix(field, values.size(), 1,
                     std::vector<Elem>(values.begin(), values.end()));
}

FieldMatrix FieldMatrix::row(Field field, std::span<const Elem> values) {
  return FieldMatrix(field, 1, values.size(),
                     std::vector<Elem>(values.begin(), values.end()));
}

std::vector<Elem> FieldMatrix::column_values(std::size_t c) const {
  std::vector<Elem> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = at(r, c);
  return t;
}

FieldMatrix FieldMatrix::block(std::size_t row0, std::size_t rows,
                               std::size_t col0, std::size_t cols) const {
  if (row0 + rows > rows_ || col0 + cols > cols_) {
    fail(ErrorCode::InvalidArgument, "block outside matrix bounds");
  }
  FieldMatrix b(field_, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(data_.begin() + (row0 + r) * cols_ + col0, cols,
                b.data_.begin() + r * cols);
  return b;
}

FieldMatrix FieldMatrix::select_rows(std::span<const std::size_t> idx) const {
  FieldMatrix s(field_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= rows_) fail(ErrorCode::InvalidArgument, "row index out of range");
    std::copy_n(data_.begin() + idx[i] * cols_, cols_, s.data_.begin() + i * cols_);
  }
  return s;
}

FieldMatrix FieldMatrix::select_cols(std::span<const std::size_t> idx) const {
  FieldMatrix s(field_, rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= cols_) fail(ErrorCode::InvalidArgument, "column index out of range");
  }
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < idx.size(); ++j)
      s.data_[r * idx.size() + j] = at(r, idx[j]);
  return s;
}

FieldMatrix FieldMatrix::scaled(Elem s) const {
  FieldMatrix out = *this;
  for (auto& e : out.data_) e = field_.mul(e, s);
  return out;
}

bool FieldMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Elem e) { return e == 0; });
}

MatrixBuilder& MatrixBuilder::set(std::size_t r, std::size_t c, Elem v) {
  if (r >= m_.rows_ || c >= m_.cols_) {
    fail(ErrorCode::InvalidArgument, "entry outside matrix bounds");
  }
  m_.data_[r * m_.cols_ + c] = v % m_.field_.modulus();
  return *this;
}

MatrixBuilder& MatrixBuilder::place(std::size_t r, std::size_t c,
                                    const FieldMatrix& src) {
  if (r + src.rows() > m_.rows_ || c + src.cols() > m_.cols_) {
    fail(ErrorCode::InvalidArgument, "placed block outside matrix bounds");
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j)
      m_.data_[(r + i) * m_.cols_ + c + j] = src.at(i, j);
  return *this;
}

namespace {

void require_same_field(const FieldMatrix& a, const FieldMatrix& b) {
  if (!(a.field() == b.field())) {
    fail(ErrorCode::InvalidArgument, "matrices live in different fields");
  }
}

}  // namespace

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) fail(ErrorCode::InvalidArgument, "shape mismatch in product");
  const auto p = static_cast<std::uint64_t>(a.field().modulus());
  MatrixBuilder out(a.field(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const std::uint64_t x = a.at(i, l);
      if (x == 0) continue;
      auto brow = b.row_span(l);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        acc[j] = (acc[j] + x * brow[j]) % p;
      }
    }
    for (std::size_t j = 0; j < b.cols(); ++j) out.set(i, j, static_cast<Elem>(acc[j]));
  }
  return std::move(out).build();
}

FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::InvalidArgument, "shape mismatch in sum");
  std::vector<Elem> e(a.entries().size());
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = a.field().add(a.entries()[i], b.entries()[i]);
  return FieldMatrix(a.field(), a.rows(), a.cols(), std::move(e));
}

FieldMatrix operator-(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::InvalidArgument, "shape mismatch in difference");
  std::vector<Elem> e(a.entries().size());
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = a.field().sub(a.entries()[i], b.entries()[i]);
  return FieldMatrix(a.field(), a.rows(), a.cols(), std::move(e));
}

FieldMatrix hstack(std::span<const FieldMatrix> parts) {
  if (parts.empty()) fail(ErrorCode::InvalidArgument, "hstack of nothing");
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts[0].rows()) fail(ErrorCode::InvalidArgument, "hstack row mismatch");
    cols += p.cols();
  }
  MatrixBuilder out(parts[0].field(), parts[0].rows(), cols);
  std::size_t c = 0;
  for (const auto& p : parts) {
    out.place(0, c, p);
    c += p.cols();
  }
  return std::move(out).build();
}

FieldMatrix vstack(std::span<const FieldMatrix> parts) {
  if (parts.empty()) fail(ErrorCode::InvalidArgument, "vstack of nothing");
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts[0].cols()) fail(ErrorCode::InvalidArgument, "vstack column mismatch");
    rows += p.rows();
  }
  MatrixBuilder out(parts[0].field(), rows, parts[0].cols());
  std::size_t r = 0;
  for (const auto& p : parts) {
    out.place(r, 0, p);
    r += p.rows();
  }
  return std::move(out).build();
}

std::vector<Elem> vec_mul(std::span<const Elem> x, const FieldMatrix& m) {
  if (x.size() != m.rows()) fail(ErrorCode::InvalidArgument, "vector length mismatch");
  const auto p = static_cast<std::uint64_t>(m.field().modulus());
  std::vector<std::uint64_t> acc(m.cols(), 0);
  for (std::size_t l = 0; l < x.size(); ++l) {
    const std::uint64_t xv = x[l];
    if (xv == 0) continue;
    auto row = m.row_span(l);
    for (std::size_t j = 0; j < m.cols(); ++j) acc[j] = (acc[j] + xv * row[j]) % p;
  }
  return std::vector<Elem>(acc.begin(), acc.end());
}

Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "dot length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc = (acc + static_cast<std::uint64_t>(a[i]) * b[i]) % f.modulus();
  }
  return static_cast<Elem>(acc);
}

namespace {

// In-place reduction to row echelon form on a scratch copy; returns rank.
// Pivot is the first nonzero entry in the column.
std::size_t echelon(const Field& f, std::vector<Elem>& a, std::size_t rows,
                    std::size_t cols, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank) {
      std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols,
                       a.begin() + rank * cols);
    }
    const Elem inv = f.inv(a[rank * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[rank * cols + j] = f.mul(a[rank * cols + j], inv);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Elem factor = a[r * cols + c];
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        a[r * cols + j] = f.sub(a[r * cols + j], f.mul(factor, a[rank * cols + j]));
      }
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t rank(const FieldMatrix& m) {
  std::vector<Elem> scratch = m.entries();
  return echelon(m.field(), scratch, m.rows(), m.cols());
}

bool is_nonsingular(const FieldMatrix& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

FieldMatrix inverse(const FieldMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::SingularMatrix, "non-square matrix");
  const std::size_t n = m.rows();
  const Field& f = m.field();
  // Gauss-Jordan on [M | I]
  std::vector<Elem> a(n * 2 * n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r * 2 * n + c] = m.at(r, c);
    a[r * 2 * n + n + r] = 1;
  }
  const std::size_t w = 2 * n;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv * w + c] == 0) ++piv;
    if (piv == n) fail(ErrorCode::SingularMatrix, "matrix is singular");
    if (piv != c) {
      std::swap_ranges(a.begin() + piv * w, a.begin() + (piv + 1) * w, a.begin() + c * w);
    }
    const Elem inv = f.inv(a[c * w + c]);
    for (std::size_t j = 0; j < w; ++j) a[c * w + j] = f.mul(a[c * w + j], inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Elem factor = a[r * w + c];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < w; ++j) {
        a[r * w + j] = f.sub(a[r * w + j], f.mul(factor, a[c * w + j]));
      }
    }
  }
  MatrixBuilder out(f, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.set(r, c, a[r * w + n + c]);
  return std::move(out).build();
}

std::vector<Elem> solve(const FieldMatrix& a, std::span<const Elem> b) {
  if (a.rows() != a.cols()) fail(ErrorCode::InvalidArgument, "solve needs a square matrix");
  if (b.size() != a.rows()) fail(ErrorCode::InvalidArgument, "right-hand side length mismatch");
  const auto x = inverse(a) * FieldMatrix::column(a.field(), b);
  return x.column_values(0);
}

FieldMatrix cauchy(const Field& f, std::span<const Elem> xs, std::span<const Elem> ys) {
  std::vector<Elem> all;
  for (Elem x : xs) all.push_back(x % f.modulus());
  for (Elem y : ys) all.push_back(y % f.modulus());
  std::vector<Elem> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::InvalidPoints, "Cauchy evaluation points must be pairwise distinct");
  }
  MatrixBuilder out(f, xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      out.set(i, j, f.inv(f.sub(all[i], all[xs.size() + j])));
  return std::move(out).build();
}

FieldMatrix vandermonde(const Field& f, std::size_t rows, std::span<const Elem> points) {
  MatrixBuilder out(f, rows, points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    Elem v = 1;
    for (std::size_t i = 0; i < rows; ++i) {
      out.set(i, j, v);
      v = f.mul(v, points[j] % f.modulus());
    }
  }
  return std::move(out).build();
}

}  // namespace rrc
