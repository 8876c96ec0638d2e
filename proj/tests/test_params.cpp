#include <gtest/gtest.h>

#include "rrc/error.hpp"
#include "rrc/params.hpp"

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

CodeParams at(int n, int k, int r, int d, Rational a, Rational b) {
  return validate({n, k, r, d, std::move(a), std::move(b), std::nullopt});
}

// straight transcription of the cut sum, term by term
Rational capacity_oracle(int k, int d, int m, const Rational& a, const Rational& b) {
  Rational total = k * a;
  for (int l = 1; l <= m; ++l) total += std::min<Rational>((d - l + 1) * b - a, 0);
  return total;
}

}  // namespace

TEST(Params, DerivedValues) {
  const auto p = make_params(12, 8, 4, 3);
  EXPECT_EQ(p.m, 2);
  EXPECT_EQ(p.t, 2);
  const auto q = make_params(9, 5, 3, 2);
  EXPECT_EQ(q.m, 1);
  EXPECT_EQ(q.t, 2);
  EXPECT_EQ(make_params(12, 8, 4).d, 3);
}

TEST(Params, DistinctErrors) {
  EXPECT_EQ(code_of([] { make_params(10, 5, 4); }), ErrorCode::NotMultiple);
  EXPECT_EQ(code_of([] { make_params(12, 12, 4); }), ErrorCode::ThresholdOutOfRange);
  EXPECT_EQ(code_of([] { make_params(12, 0, 4); }), ErrorCode::ThresholdOutOfRange);
  EXPECT_EQ(code_of([] { make_params(12, 8, 4, 1); }), ErrorCode::DegreeOutOfRange);
  EXPECT_EQ(code_of([] { make_params(12, 8, 4, 4); }), ErrorCode::DegreeOutOfRange);
}

TEST(Params, CapacityExamples) {
  EXPECT_EQ(capacity(at(12, 8, 4, 3, 2, 1)), 16);
  EXPECT_EQ(capacity(at(12, 8, 4, 3, 3, 1)), 23);
  EXPECT_EQ(capacity(at(9, 5, 3, 2, 1, 1)), 5);
  EXPECT_EQ(at(12, 8, 4, 3, 3, 1).file_size, 23);
}

TEST(Params, CapacityMatchesOracleAndIsMonotone) {
  const std::vector<Rational> grid{Rational(1, 7), Rational(1, 3), Rational(1, 2), 1,
                                   Rational(3, 2), 2, 3};
  for (auto [n, k, r] : {std::tuple{12, 8, 4}, {9, 5, 3}, {20, 11, 5}, {12, 7, 6}}) {
    const int m = k * r / n;
    for (int d = m; d < r; ++d) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const Rational c = capacity(at(n, k, r, d, grid[i], grid[j]));
          EXPECT_EQ(c, capacity_oracle(k, d, m, grid[i], grid[j]));
          if (i + 1 < grid.size()) {
            EXPECT_LE(c, capacity(at(n, k, r, d, grid[i + 1], grid[j])));
          }
          if (j + 1 < grid.size()) {
            EXPECT_LE(c, capacity(at(n, k, r, d, grid[i], grid[j + 1])));
          }
          if (grid[i] <= (d - m + 1) * grid[j]) {
            EXPECT_EQ(c, k * grid[i]);
          }
        }
      }
      EXPECT_EQ(capacity(at(n, k, r, d, d - m + 1, 1)), k * (d - m + 1));
    }
  }
}

TEST(Layout, SystematicRoles) {
  const auto p = make_params(12, 8, 4, 3);
  const auto l = RackLayout::systematic(p);
  EXPECT_EQ(l.role(0), RackRole::Data);
  EXPECT_EQ(l.role(1), RackRole::Data);
  EXPECT_EQ(l.role(2), RackRole::Hybrid);
  EXPECT_EQ(l.role(3), RackRole::Coded);
  EXPECT_EQ(l.relayer(2), 6);
  EXPECT_EQ(l.rack_of(7), 2);
  EXPECT_EQ(l.slot_of(7), 1);
  EXPECT_EQ(l.node_index({3, 2}), 11);
  const auto h = RackLayout::systematic(make_params(12, 9, 4, 3));
  EXPECT_EQ(h.role(3), RackRole::Coded);
  EXPECT_EQ(h.role(2), RackRole::Data);
}

TEST(Layout, HelperChecks) {
  const auto p = make_params(12, 8, 4, 3);
  EXPECT_NO_THROW(check_helpers(p, 0, {1, 2, 3}));
  EXPECT_EQ(code_of([&] { check_helpers(p, 0, {0, 1, 2}); }), ErrorCode::InvalidHelpers);
  EXPECT_EQ(code_of([&] { check_helpers(p, 0, {1, 2}); }), ErrorCode::InvalidHelpers);
  EXPECT_EQ(code_of([&] { check_helpers(p, 0, {1, 1, 2}); }), ErrorCode::InvalidHelpers);
  EXPECT_EQ(code_of([&] { check_helpers(p, 0, {1, 2, 4}); }), ErrorCode::InvalidHelpers);
}
