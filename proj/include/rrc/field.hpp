#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rrc {

using Elem = std::uint32_t;

/// Prime field GF(p) with 2 <= p < 2^31. Elements are canonical residues.
class Field {
 public:
  /// Throws InvalidArgument unless `modulus` is a prime below 2^31.
  explicit Field(std::uint32_t modulus);

  std::uint32_t modulus() const noexcept { return p_; }

  Elem add(Elem a, Elem b) const noexcept {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Elem pow(Elem base, std::uint64_t exp) const noexcept;
  /// Throws NonInvertible for zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Reduces an arbitrary signed integer into the field.
  Elem from_int(std::int64_t v) const noexcept;

  Elem random(std::mt19937_64& rng) const;
  Elem random_nonzero(std::mt19937_64& rng) const;

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t v) noexcept;

/// Dense row-major matrix over a prime field. Values are immutable once
/// constructed; every operation below returns a new matrix.
class FieldMatrix {
 public:
  FieldMatrix(Field field, std::size_t rows, std::size_t cols);
  /// Throws InvalidArgument when the entry count or any entry is out of range.
  FieldMatrix(Field field, std::size_t rows, std::size_t cols,
              std::vector<Elem> entries);

  static FieldMatrix identity(Field field, std::size_t n);
  static FieldMatrix random(Field field, std::size_t rows, std::size_t cols,
                            std::mt19937_64& rng);
  static FieldMatrix random_nonzero(Field field, std::size_t rows,
                                    std::size_t cols, std::mt19937_64& rng);
  static FieldMatrix column(Field field, std::span<const Elem> values);
  static FieldMatrix row(Field field, std::span<const Elem> values);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Elem at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Elem> row_span(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<Elem>& entries() const noexcept { return data_; }
  std::vector<Elem> column_values(std::size_t c) const;

  FieldMatrix transpose() const;
  FieldMatrix block(std::size_t row0, std::size_t rows, std::size_t col0,
                    std::size_t cols) const;
  FieldMatrix select_rows(std::span<const std::size_t> idx) const;
  FieldMatrix select_cols(std::span<const std::size_t> idx) const;
  FieldMatrix scaled(Elem s) const;

  bool is_zero() const noexcept;

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.data_ == b.data_;
  }

 private:
  friend class MatrixBuilder;
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

/// Mutable staging area for assembling a FieldMatrix entry by entry.
class MatrixBuilder {
 public:
  MatrixBuilder(Field field, std::size_t rows, std::size_t cols)
      : m_(field, rows, cols) {}
  explicit MatrixBuilder(FieldMatrix start) : m_(std::move(start)) {}

  MatrixBuilder& set(std::size_t r, std::size_t c, Elem v);
  /// Copies `src` with its top-left corner at (r, c).
  MatrixBuilder& place(std::size_t r, std::size_t c, const FieldMatrix& src);
  Elem get(std::size_t r, std::size_t c) const { return m_.at(r, c); }
  FieldMatrix build() && { return std::move(m_); }
  FieldMatrix build() const& { return m_; }

 private:
  FieldMatrix m_;
};

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix operator-(const FieldMatrix& a, const FieldMatrix& b);

FieldMatrix hstack(std::span<const FieldMatrix> parts);
FieldMatrix vstack(std::span<const FieldMatrix> parts);

/// Row vector times matrix: returns x * M.
std::vector<Elem> vec_mul(std::span<const Elem> x, const FieldMatrix& m);
Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b);

std::size_t rank(const FieldMatrix& m);
bool is_nonsingular(const FieldMatrix& m);
/// Throws SingularMatrix.
FieldMatrix inverse(const FieldMatrix& m);
/// Solves A x = b for square non-singular A. Throws SingularMatrix.
std::vector<Elem> solve(const FieldMatrix& a, std::span<const Elem> b);

/// Entry (i, j) = 1 / (xs[i] - ys[j]). Throws InvalidPoints when any two
/// points coincide.
FieldMatrix cauchy(const Field& f, std::span<const Elem> xs,
                   std::span<const Elem> ys);
/// rows x points.size(), column j = (1, x_j, x_j^2, ...)^T.
FieldMatrix vandermonde(const Field& f, std::size_t rows,
                        std::span<const Elem> points);

}  // namespace rrc
