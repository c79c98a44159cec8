#include <gtest/gtest.h>

#include "qprok/approach.hpp"
#include "support.hpp"

namespace qprok::approach {
namespace {

using Table = std::vector<std::vector<std::vector<Extended>>>;

Extended inf() { return Extended::infinity(); }

// Independent index computation: the smallest attained gauge value at which
// the defining cover condition holds with <= in place of <.
struct OracleIndices {
  Extended rsc, rc, lindelof;
};

OracleIndices oracle_indices(const FiniteSpace& s, const std::vector<std::size_t>& subset) {
  std::vector<Extended> values{Extended(0)};
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t k = 0; k < s.basis_size(x); ++k) {
      for (std::size_t y = 0; y < s.size(); ++y) values.push_back(s.gauge(x, k, y));
    }
  }
  std::sort(values.begin(), values.end());

  auto rsc_ok = [&](const Extended& v) {
    for (auto a : subset) {
      bool found = false;
      for (std::size_t x = 0; x < s.size(); ++x) {
        bool all = true;
        for (std::size_t k = 0; k < s.basis_size(x); ++k) all = all && s.gauge(x, k, a) <= v;
        found = found || all;
      }
      if (!found) return false;
    }
    return true;
  };
  auto cover_ok = [&](const std::vector<std::size_t>& targets, const Extended& v) {
    std::vector<std::size_t> sel(s.size(), 0);
    for (;;) {
      for (auto a : targets) {
        bool found = false;
        for (std::size_t x = 0; x < s.size(); ++x) found = found || s.gauge(x, sel[x], a) <= v;
        if (!found) return false;
      }
      std::size_t x = 0;
      while (x < s.size() && ++sel[x] == s.basis_size(x)) sel[x++] = 0;
      if (x == s.size()) return true;
    }
  };
  std::vector<std::size_t> all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto first = [&](auto pred) {
    for (const auto& v : values) {
      if (pred(v)) return v;
    }
    return inf();
  };
  return {first(rsc_ok), first([&](const Extended& v) { return cover_ok(subset, v); }),
          first([&](const Extended& v) { return cover_ok(all, v); })};
}

TEST(Extended, OrderAndArithmetic) {
  EXPECT_LT(Extended(rational(1, 2)), Extended(1));
  EXPECT_LT(Extended(5), inf());
  EXPECT_FALSE(inf() < inf());
  EXPECT_EQ(inf(), inf());
  EXPECT_EQ(Extended(rational(1, 3)) + Extended(rational(1, 6)), Extended(rational(1, 2)));
  EXPECT_TRUE((Extended(1) + inf()).is_infinite());
  EXPECT_EQ(inf().str(), "inf");
  EXPECT_THROW(inf().value(), std::domain_error);
}

TEST(Ball, StrictInequality) {
  const FiniteSpace s = FiniteSpace::from_distance({{0, 2}, {2, 0}});
  const auto space = s.as_space();
  EXPECT_TRUE(ball_contains(space, Ball<std::size_t>{0, 0, 3}, std::size_t{1}));
  EXPECT_FALSE(ball_contains(space, Ball<std::size_t>{0, 0, 2}, std::size_t{1}));
  EXPECT_THROW(ball_contains(space, Ball<std::size_t>{0, 0, 0}, std::size_t{1}),
               std::invalid_argument);
}

TEST(EpsConvergent, FiniteSequences) {
  const FiniteSpace s = FiniteSpace::from_distance({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto space = s.as_space();
  const auto constant = as_tail(s, {{2, 1}, {0}});
  for (const auto& e : {rational(1, 100), rational(1), rational(5)}) {
    EXPECT_TRUE(eps_convergent(space, constant, std::size_t{0}, e, 8));
  }
  const auto alternating = as_tail(s, {{}, {0, 2}});
  EXPECT_FALSE(eps_convergent(space, alternating, std::size_t{1}, rational(1), 8));
  EXPECT_TRUE(eps_convergent(space, alternating, std::size_t{1}, rational(3, 2), 8));
  EXPECT_THROW(eps_convergent(space, alternating, std::size_t{1}, rational(0), 8),
               std::invalid_argument);
}

TEST(LimitOperator, FiniteSequences) {
  const FiniteSpace s = FiniteSpace::from_distance({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto space = s.as_space();
  const std::vector<Rational> grid{rational(1, 2), 1, 2};
  const Bracket c = limit_operator_generic(space, as_tail(s, {{}, {0}}), std::size_t{0}, grid, 4);
  EXPECT_EQ(c.lower, Extended(0));
  EXPECT_EQ(c.upper, Extended(0));
  const Bracket a = limit_operator_generic(space, as_tail(s, {{}, {0, 2}}), std::size_t{1}, grid, 4);
  EXPECT_EQ(a.lower, Extended(1));
  EXPECT_EQ(a.upper, Extended(1));
  const Bracket b = limit_operator_generic(space, as_tail(s, {{}, {0, 2}}), std::size_t{0}, grid, 4);
  EXPECT_EQ(b.lower, Extended(2));
  EXPECT_EQ(b.upper, Extended(2));
}

TEST(LimitOperator, InfiniteGauge) {
  const FiniteSpace s = FiniteSpace::from_distance({{0, inf()}, {inf(), 0}});
  const Bracket b = limit_operator_generic(s.as_space(), as_tail(s, {{}, {1}}), std::size_t{0},
                                           {rational(1)}, 4);
  EXPECT_TRUE(b.upper.is_infinite());
}

TEST(DiagonalExtract, NestedLevels) {
  const std::vector<std::vector<std::size_t>> levels{
      {1, 2, 3, 4, 5, 6}, {2, 3, 4, 5, 6}, {3, 5, 6}, {5, 6}};
  EXPECT_EQ(diagonal_extract(levels), (std::vector<std::size_t>{1, 3, 6}));
  EXPECT_TRUE(diagonal_extract({}).empty());
  EXPECT_THROW(diagonal_extract({{1, 2, 3}, {1, 1, 1}}), std::logic_error);
}

TEST(FiniteSpace, Validation) {
  EXPECT_THROW(FiniteSpace(Table{}), std::invalid_argument);
  EXPECT_THROW(FiniteSpace(Table{{}}), std::invalid_argument);
  EXPECT_THROW(FiniteSpace(Table{{{0, 1}}}), std::invalid_argument);
  EXPECT_THROW(FiniteSpace(Table{{{1}}}), std::invalid_argument);
  EXPECT_THROW(as_tail(FiniteSpace(Table{{{0}}}), {{}, {}}), std::invalid_argument);
  EXPECT_THROW(as_tail(FiniteSpace(Table{{{0}}}), {{}, {3}}), std::invalid_argument);
}

TEST(IndicesBruteforce, DegenerateOnFiniteSpaces) {
  // Two points, asymmetric quasi-gauges.
  const FiniteSpace s(Table{{{0, 1}, {0, 3}}, {{inf(), 0}}});
  const FiniteIndices r = indices_bruteforce(s, {0, 1}, {rational(1, 10), 1});
  EXPECT_EQ(r.chi_rsc, Extended(0));
  EXPECT_EQ(r.chi_rc, Extended(0));
  EXPECT_EQ(r.chi_lindelof, Extended(0));
  EXPECT_EQ(r.rc_witness.size(), 2u);
  EXPECT_EQ(r.selections_checked, 2u);
  for (const auto& w : r.rc_witness) EXPECT_EQ(w.value, Extended(0));
  EXPECT_THROW(indices_bruteforce(s, {2}, {}), std::invalid_argument);
  EXPECT_THROW(indices_bruteforce(s, {0}, {rational(0)}), std::invalid_argument);
}

TEST(IndicesBruteforce, MatchesOracleOnRandomSpaces) {
  testing::Gen gen(31);
  const std::vector<Extended> pool{Extended(0), Extended(rational(1, 4)), Extended(rational(1, 2)),
                                   Extended(1), inf()};
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(gen.integer(1, 5));
    Table t(n);
    for (std::size_t x = 0; x < n; ++x) {
      t[x].resize(static_cast<std::size_t>(gen.integer(1, 3)));
      for (auto& g : t[x]) {
        g.resize(n);
        for (std::size_t y = 0; y < n; ++y) {
          g[y] = x == y ? Extended(0) : pool[static_cast<std::size_t>(gen.integer(0, 4))];
        }
      }
    }
    const FiniteSpace s(t);
    std::vector<std::size_t> subset;
    for (std::size_t a = 0; a < n; ++a) {
      if (gen.coin()) subset.push_back(a);
    }
    const FiniteIndices r = indices_bruteforce(s, subset, {rational(1, 8), rational(3, 4), 2});
    const OracleIndices o = oracle_indices(s, subset);
    ASSERT_EQ(r.chi_rsc, o.rsc);
    ASSERT_EQ(r.chi_rc, o.rc);
    ASSERT_EQ(r.chi_lindelof, o.lindelof);
    EXPECT_LE(r.chi_rsc, r.chi_rc);
    EXPECT_LE(r.chi_rc, r.chi_rsc + r.chi_lindelof);
  }
}

TEST(Theorem22Check, PassesAndFails) {
  const Bracket zero{Extended(0), Extended(0)};
  const Theorem22Report ok = theorem22_check(zero, zero, zero);
  EXPECT_EQ(ok.lines.size(), 5u);
  for (const auto& l : ok.lines) EXPECT_EQ(l.rfind("PASS", 0), 0u) << l;

  const Bracket high{Extended(1), Extended(1)};
  EXPECT_THROW(theorem22_check(high, zero, zero), ContractViolation);
  EXPECT_THROW(theorem22_check(zero, high, zero), ContractViolation);
  EXPECT_NO_THROW(theorem22_check(zero, high, high));
  try {
    theorem22_check(zero, Bracket{Extended(1), Extended(0)}, zero);
    FAIL() << "expected throw";
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("FAIL chi_rc bracket"), std::string::npos);
  }
}

}  // namespace
}  // namespace qprok::approach
