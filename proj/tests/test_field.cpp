#include <gtest/gtest.h>

#include <bit>
#include <numeric>
#include <random>

#include "rrc/error.hpp"
#include "rrc/field.hpp"

using namespace rrc;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

// brute-force inverse by scanning the field
Elem scan_inverse(const Field& f, Elem a) {
  for (Elem x = 1; x < f.modulus(); ++x) {
    if (f.mul(a, x) == 1) return x;
  }
  return 0;
}

FieldMatrix mat(const Field& f, std::size_t r, std::size_t c, std::vector<Elem> v) {
  return FieldMatrix(f, r, c, std::move(v));
}

}  // namespace

TEST(Field, RejectsComposite) {
  EXPECT_EQ(code_of([] { Field f(12); }), ErrorCode::InvalidArgument);
  EXPECT_NO_THROW(Field(65537));
  EXPECT_NO_THROW(Field(2147483647u));
}

TEST(Field, InverseExamples) {
  const Field f(11);
  EXPECT_EQ(f.inv(1), 1u);
  EXPECT_EQ(f.inv(3), 4u);
  EXPECT_EQ(code_of([&] { f.inv(0); }), ErrorCode::NonInvertible);
}

TEST(Field, InverseMatchesScanForSmallPrimes) {
  for (std::uint32_t p : {2u, 3u, 5u, 11u, 13u, 257u}) {
    const Field f(p);
    for (Elem a = 1; a < p; ++a) {
      EXPECT_EQ(f.inv(a), scan_inverse(f, a)) << p << " " << a;
      EXPECT_EQ(f.inv(f.inv(a)), a);
    }
  }
}

TEST(Field, InverseInvolutionLargeField) {
  const Field f(65537);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Elem a = f.random_nonzero(rng);
    EXPECT_EQ(f.inv(f.inv(a)), a);
    EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  }
}

TEST(Field, FromIntReducesNegatives) {
  const Field f(11);
  EXPECT_EQ(f.from_int(-1), 10u);
  EXPECT_EQ(f.from_int(-22), 0u);
  EXPECT_EQ(f.from_int(25), 3u);
}

TEST(Matrix, RejectsOutOfRangeEntries) {
  const Field f(11);
  EXPECT_EQ(code_of([&] { mat(f, 1, 2, {1, 11}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { mat(f, 2, 2, {1, 2, 3}); }), ErrorCode::InvalidArgument);
}

TEST(Matrix, RankExamples) {
  const Field f(11);
  EXPECT_EQ(rank(FieldMatrix::identity(f, 4)), 4u);
  EXPECT_EQ(rank(FieldMatrix(f, 2, 2)), 0u);
  const auto m = mat(f, 2, 2, {1, 2, 2, 4});
  EXPECT_EQ(rank(m), 1u);
  // input untouched
  EXPECT_EQ(m, mat(f, 2, 2, {1, 2, 2, 4}));
}

TEST(Matrix, SolveExamples) {
  const Field f(11);
  const std::vector<Elem> b{4, 9};
  EXPECT_EQ(solve(FieldMatrix::identity(f, 2), b), b);
  EXPECT_EQ(solve(mat(f, 2, 2, {2, 0, 0, 3}), b), (std::vector<Elem>{2, 3}));
  EXPECT_EQ(code_of([&] { solve(mat(f, 2, 2, {1, 2, 2, 4}), b); }), ErrorCode::SingularMatrix);
  EXPECT_EQ(code_of([&] { inverse(mat(f, 2, 2, {1, 2, 2, 4})); }), ErrorCode::SingularMatrix);
}

TEST(Matrix, SolveRoundTripRandom) {
  const Field f(65537);
  std::mt19937_64 rng(11);
  int done = 0;
  while (done < 200) {
    const std::size_t n = 1 + rng() % 8;
    const auto a = FieldMatrix::random(f, n, n, rng);
    if (!is_nonsingular(a)) continue;
    std::vector<Elem> x(n);
    for (auto& v : x) v = f.random(rng);
    const auto ax = (a * FieldMatrix::column(f, x)).column_values(0);
    EXPECT_EQ(solve(a, ax), x);
    EXPECT_EQ(a * inverse(a), FieldMatrix::identity(f, n));
    ++done;
  }
}

TEST(Matrix, InverseExhaustiveTwoByTwoGF5) {
  // every nonsingular 2x2 over GF(5) against the adjugate formula
  const Field f(5);
  for (Elem a = 0; a < 5; ++a)
    for (Elem b = 0; b < 5; ++b)
      for (Elem c = 0; c < 5; ++c)
        for (Elem d = 0; d < 5; ++d) {
          const auto m = mat(f, 2, 2, {a, b, c, d});
          const Elem det = f.sub(f.mul(a, d), f.mul(b, c));
          if (det == 0) {
            EXPECT_FALSE(is_nonsingular(m));
            continue;
          }
          const Elem di = scan_inverse(f, det);
          const auto expect = mat(f, 2, 2,
                                  {f.mul(d, di), f.mul(f.neg(b), di), f.mul(f.neg(c), di),
                                   f.mul(a, di)});
          EXPECT_EQ(inverse(m), expect);
        }
}

TEST(Matrix, RankOfProductBounded) {
  const Field f(13);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const std::size_t r = 1 + rng() % 5, k = 1 + rng() % 5, c = 1 + rng() % 5;
    // low-rank factors are common over GF(13) with small sizes
    const auto a = FieldMatrix::random(f, r, k, rng) * FieldMatrix::random(f, k, k, rng);
    const auto b = FieldMatrix::random(f, k, c, rng);
    EXPECT_LE(rank(a * b), std::min(rank(a), rank(b)));
  }
}

TEST(Matrix, TransposeBlockAndStacks) {
  const Field f(11);
  const auto m = mat(f, 2, 3, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(m.transpose(), mat(f, 3, 2, {1, 4, 2, 5, 3, 6}));
  EXPECT_EQ(m.block(0, 2, 1, 2), mat(f, 2, 2, {2, 3, 5, 6}));
  const FieldMatrix parts[] = {m.block(0, 2, 0, 1), m.block(0, 2, 1, 2)};
  EXPECT_EQ(hstack(parts), m);
  const FieldMatrix rows[] = {m.block(0, 1, 0, 3), m.block(1, 1, 0, 3)};
  EXPECT_EQ(vstack(rows), m);
  const std::vector<Elem> x{1, 1};
  EXPECT_EQ(vec_mul(x, m), (std::vector<Elem>{5, 7, 9}));
}

TEST(Cauchy, KnownExample) {
  const Field f(11);
  const std::vector<Elem> xs{1, 2}, ys{3, 4};
  EXPECT_EQ(cauchy(f, xs, ys), mat(f, 2, 2, {5, 7, 10, 5}));
}

TEST(Cauchy, RejectsCollidingPoints) {
  const Field f(11);
  const std::vector<Elem> one{1};
  EXPECT_EQ(code_of([&] { cauchy(f, one, one); }), ErrorCode::InvalidPoints);
  const std::vector<Elem> dup{1, 1}, ys{3};
  EXPECT_EQ(code_of([&] { cauchy(f, dup, ys); }), ErrorCode::InvalidPoints);
}

TEST(Cauchy, TwoByTwoMinorsOfThreeByThreeGF13) {
  const Field f(13);
  const std::vector<Elem> xs{1, 2, 3}, ys{4, 5, 6};
  const auto c = cauchy(f, xs, ys);
  int checked = 0;
  for (std::size_t r0 = 0; r0 < 3; ++r0)
    for (std::size_t r1 = r0 + 1; r1 < 3; ++r1)
      for (std::size_t c0 = 0; c0 < 3; ++c0)
        for (std::size_t c1 = c0 + 1; c1 < 3; ++c1) {
          const std::size_t ri[] = {r0, r1}, ci[] = {c0, c1};
          EXPECT_EQ(rank(c.select_rows(ri).select_cols(ci)), 2u);
          ++checked;
        }
  EXPECT_EQ(checked, 9);
}

TEST(Cauchy, EverySquareSubmatrixNonsingularUpToFive) {
  const Field f(31);
  const std::vector<Elem> xs{1, 2, 3, 4, 5}, ys{10, 11, 12, 13, 14};
  const auto c = cauchy(f, xs, ys);
  for (unsigned rm = 1; rm < 32; ++rm) {
    for (unsigned cm = 1; cm < 32; ++cm) {
      if (std::popcount(rm) != std::popcount(cm)) continue;
      std::vector<std::size_t> ri, ci;
      for (std::size_t i = 0; i < 5; ++i) {
        if (rm >> i & 1) ri.push_back(i);
        if (cm >> i & 1) ci.push_back(i);
      }
      EXPECT_TRUE(is_nonsingular(c.select_rows(ri).select_cols(ci)));
    }
  }
}

TEST(Vandermonde, AnySquareColumnSetInvertible) {
  const Field f(11);
  const std::vector<Elem> pts{1, 2, 3, 4};
  const auto v = vandermonde(f, 3, pts);
  EXPECT_EQ(v.at(2, 3), 5u);  // 4^2 = 16 = 5 mod 11
  for (unsigned cm = 0; cm < 16; ++cm) {
    if (std::popcount(cm) != 3) continue;
    std::vector<std::size_t> ci;
    for (std::size_t i = 0; i < 4; ++i)
      if (cm >> i & 1) ci.push_back(i);
    EXPECT_TRUE(is_nonsingular(v.select_cols(ci)));
  }
}
