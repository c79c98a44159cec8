#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "qprok/cdf.hpp"
#include "support.hpp"

namespace qprok {
namespace {

using testing::Gen;

Rational R(const char* s) { return parse_rational(s); }

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(R("3/10"), rational(3, 10));
  EXPECT_EQ(R("-7"), rational(-7));
  EXPECT_EQ(R("6/4"), rational(3, 2));
  EXPECT_EQ(to_string(R("6/4")), "3/2");
  EXPECT_EQ(to_string(rational(-4, 2)), "-2");
}

TEST(Rational, RejectsMalformed) {
  for (const char* bad : {"", "1/0", "0.5", "a/b", "1//2", "1/", "/2", " 1"}) {
    EXPECT_THROW(R(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, Ceil) {
  EXPECT_EQ(ceil(rational(7, 2)), 4);
  EXPECT_EQ(ceil(rational(-7, 2)), -3);
  EXPECT_EQ(ceil(rational(4)), 4);
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(dirac(0), -1), 0);
  EXPECT_EQ(eval(dirac(0), 0), 1);
  const std::array<Rational, 2> w{rational(7, 10), rational(3, 10)};
  const std::array<Cdf, 2> p{dirac(0), dirac(5)};
  EXPECT_EQ(eval(mixture(w, p), 2), rational(7, 10));
}

TEST(LeftLimit, Examples) {
  EXPECT_EQ(left_limit(dirac(0), 0), 0);
  EXPECT_EQ(left_limit(dirac(0), 1), 1);
  EXPECT_EQ(left_limit(uniform(0, 1), rational(1, 2)), rational(1, 2));
}

TEST(Mixture, Examples) {
  const Cdf f = uniform(0, 1);
  const std::array<Rational, 1> one{1};
  const std::array<Cdf, 1> just_f{f};
  EXPECT_EQ(mixture(one, just_f), f);

  const std::array<Rational, 2> half{rational(1, 2), rational(1, 2)};
  const std::array<Cdf, 2> twice{dirac(0), dirac(0)};
  EXPECT_EQ(mixture(half, twice), dirac(0));

  const std::array<Rational, 2> w{rational(7, 10), rational(3, 10)};
  const std::array<Cdf, 2> p{dirac(0), dirac(5)};
  const Cdf m = mixture(w, p);
  const std::vector<Jump> expected{{0, rational(7, 10)}, {5, rational(3, 10)}};
  EXPECT_EQ(m.jumps(), expected);
  EXPECT_TRUE(m.segments().empty());
}

TEST(Mixture, Errors) {
  const std::array<Rational, 2> bad_sum{rational(1, 2), rational(1, 3)};
  const std::array<Cdf, 2> p{dirac(0), dirac(1)};
  try {
    mixture(bad_sum, p);
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("5/6"), std::string::npos) << e.what();
  }
  const std::array<Rational, 2> negative{rational(3, 2), rational(-1, 2)};
  EXPECT_THROW(mixture(negative, p), std::invalid_argument);
  const std::array<Rational, 1> one{1};
  EXPECT_THROW(mixture(one, p), std::invalid_argument);
  EXPECT_THROW(mixture(std::span<const Rational>{}, std::span<const Cdf>{}), std::invalid_argument);
}

TEST(Mixture, ZeroWeightsDropped) {
  const std::array<Rational, 2> w{1, 0};
  const std::array<Cdf, 2> p{dirac(0), uniform(5, 6)};
  EXPECT_EQ(mixture(w, p), dirac(0));
}

TEST(Shift, Examples) {
  const Cdf f = uniform(-1, 2);
  EXPECT_EQ(shift(f, 0), f);
  EXPECT_EQ(shift(dirac(0), 3), dirac(3));
  EXPECT_EQ(shift(uniform(0, 1), 2), uniform(2, 3));
}

TEST(Convolve, Examples) {
  EXPECT_EQ(convolve(dirac(rational(1, 3)), dirac(rational(-5, 2))), dirac(rational(-13, 6)));
  const Cdf f = uniform(0, 1);
  EXPECT_EQ(convolve(dirac(0), f), f);
  const std::array<Rational, 2> half{rational(1, 2), rational(1, 2)};
  const std::array<Cdf, 2> a{dirac(0), dirac(1)};
  const std::array<Cdf, 2> b{dirac(2), dirac(3)};
  EXPECT_EQ(convolve(mixture(half, a), dirac(2)), mixture(half, b));
}

TEST(Convolve, TwoContinuousPartsRejected) {
  EXPECT_THROW(convolve(uniform(0, 1), uniform(0, 1)), std::domain_error);
}

TEST(Convolve, DiscreteWithUniformMatchesOracle) {
  Gen gen(11);
  for (int i = 0; i < 50; ++i) {
    const Cdf f = gen.discrete();
    const Cdf g = gen.mixed();
    const Cdf h = convolve(f, g);
    EXPECT_EQ(h, convolve(g, f));
    for (long k = -24; k <= 24; ++k) {
      const Rational x = rational(k, 5);
      EXPECT_EQ(h(x), testing::convolve_eval_oracle(f, g, x));
    }
  }
}

TEST(Construct, Errors) {
  EXPECT_THROW(uniform(1, 1), std::invalid_argument);
  EXPECT_THROW(uniform(2, 1), std::invalid_argument);
  EXPECT_THROW(Cdf::from_parts({{0, rational(1, 2)}}, {}), std::invalid_argument);
  EXPECT_THROW(Cdf::from_parts({{0, rational(3, 2)}, {1, rational(-1, 2)}}, {}),
               std::invalid_argument);
  EXPECT_THROW(Cdf::from_parts({}, {{1, 1, 1}}), std::invalid_argument);
  try {
    Cdf::from_parts({{0, rational(1, 4)}}, {{0, 1, rational(1, 4)}});
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1/2"), std::string::npos) << e.what();
  }
}

TEST(Canonical, OverlappingSegmentsSplitAndMerged) {
  // Two halves of a uniform give back the uniform.
  const Cdf a = Cdf::from_parts({}, {{0, rational(1, 2), rational(1, 2)}, {rational(1, 2), 1, rational(1, 2)}});
  EXPECT_EQ(a, uniform(0, 1));
  // Overlap adds densities.
  const Cdf b = Cdf::from_parts({}, {{0, 2, rational(1, 2)}, {1, 2, rational(1, 2)}});
  ASSERT_EQ(b.segments().size(), 2u);
  EXPECT_EQ(b.segments()[0], (Segment{0, 1, rational(1, 4)}));
  EXPECT_EQ(b.segments()[1], (Segment{1, 2, rational(3, 4)}));
}

TEST(Canonical, OrderOfPartsIrrelevant) {
  Gen gen(5);
  for (int i = 0; i < 100; ++i) {
    const Cdf f = gen.mixed();
    std::vector<Jump> jumps(f.jumps().rbegin(), f.jumps().rend());
    std::vector<Segment> segs(f.segments().rbegin(), f.segments().rend());
    // Split every jump in two equal halves too.
    std::vector<Jump> split;
    for (const auto& j : jumps) {
      split.push_back({j.location, j.mass / 2});
      split.push_back({j.location, j.mass / 2});
    }
    EXPECT_EQ(Cdf::from_parts(split, segs), f);
  }
}

TEST(Eval, MatchesOracleOnRandomCdfs) {
  Gen gen(1);
  for (int i = 0; i < 200; ++i) {
    const Cdf f = gen.mixed();
    for (long k = -30; k <= 30; ++k) {
      const Rational x = rational(k, 8);
      ASSERT_EQ(f(x), testing::eval_oracle(f, x)) << describe(f) << " at " << to_string(x);
      ASSERT_EQ(f.left_limit(x), testing::left_oracle(f, x));
    }
  }
}

TEST(Cdf, StructuralQueries) {
  const std::array<Rational, 2> w{rational(1, 2), rational(1, 2)};
  const std::array<Cdf, 2> p{dirac(0), uniform(1, 3)};
  const Cdf f = mixture(w, p);
  EXPECT_EQ(f.knots(), (std::vector<Rational>{0, 1, 3}));
  EXPECT_EQ(f.support(), (SupportBound{0, 3}));
  EXPECT_FALSE(f.is_continuous());
  EXPECT_FALSE(f.is_discrete());
  EXPECT_EQ(f.jump_at(0), rational(1, 2));
  EXPECT_TRUE(f.continuous_at(1));
  EXPECT_EQ(f(2), rational(3, 4));
}

TEST(Cdf, MonotoneAndBounded) {
  Gen gen(9);
  for (int i = 0; i < 100; ++i) {
    const Cdf f = gen.any();
    Rational prev = 0;
    for (long k = -40; k <= 40; ++k) {
      const Rational v = f(rational(k, 8));
      ASSERT_GE(v, prev);
      ASSERT_LE(v, 1);
      prev = v;
    }
    EXPECT_EQ(f(f.support().high), 1);
    EXPECT_EQ(f.left_limit(f.support().low), 0);
  }
}

}  // namespace
}  // namespace qprok
