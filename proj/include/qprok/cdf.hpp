#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qprok/rational.hpp"

namespace qprok {

struct Jump {
  Rational location;
  Rational mass;

  bool operator==(const Jump&) const = default;
};

/// Uniform-density piece of the continuous part: `mass` spread evenly over
/// [left, right].
struct Segment {
  Rational left;
  Rational right;
  Rational mass;

  Rational density() const { return mass / (right - left); }

  bool operator==(const Segment&) const = default;
};

/// Closed window outside of which a Cdf is flat: F(x) = 0 for x < low and
/// F(x) = 1 for x >= high.
struct SupportBound {
  Rational low;
  Rational high;

  bool operator==(const SupportBound&) const = default;
};

/// Cumulative distribution function with a finite exact representation:
/// point masses plus piecewise-uniform density.
///
/// Instances are always in canonical form: jumps strictly increasing with
/// positive mass, segments disjoint with positive mass and adjacent
/// equal-density pieces merged, total mass exactly one. Two Cdfs that
/// evaluate identically therefore compare equal with `==`.
class Cdf {
 public:
  /// Builds the canonical form from arbitrary parts. Zero masses are dropped,
  /// coincident jumps merged and overlapping segments split and summed.
  /// Throws std::invalid_argument on negative mass, a degenerate segment or a
  /// total mass other than 1.
  static Cdf from_parts(std::vector<Jump> jumps, std::vector<Segment> segments);

  const std::vector<Jump>& jumps() const { return jumps_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Sorted distinct jump locations and segment endpoints. Between two
  /// consecutive knots F is affine; outside [front, back] it is constant.
  const std::vector<Rational>& knots() const { return knots_; }

  SupportBound support() const { return {knots_.front(), knots_.back()}; }

  bool is_continuous() const { return jumps_.empty(); }
  bool is_discrete() const { return segments_.empty(); }

  /// F(x), right-continuous.
  Rational operator()(const Rational& x) const;
  /// lim_{y -> x-} F(y).
  Rational left_limit(const Rational& x) const;
  /// Mass of the jump at x (0 when F is continuous at x).
  Rational jump_at(const Rational& x) const;
  bool continuous_at(const Rational& x) const { return jump_at(x) == 0; }

  bool operator==(const Cdf& other) const {
    return jumps_ == other.jumps_ && segments_ == other.segments_;
  }

 private:
  Cdf() = default;

  Rational continuous_part(const Rational& x) const;

  std::vector<Jump> jumps_;
  std::vector<Segment> segments_;
  std::vector<Rational> knots_;
  // Cumulative masses: jump_cum_[i] = mass of jumps_[0..i], likewise for
  // segments.
  std::vector<Rational> jump_cum_;
  std::vector<Rational> segment_cum_;
};

Rational eval(const Cdf& f, const Rational& x);
Rational left_limit(const Cdf& f, const Rational& x);

Cdf dirac(const Rational& a);
/// Uniform distribution on [a, b]; requires a < b.
Cdf uniform(const Rational& a, const Rational& b);
/// Convex combination. Weights must be nonnegative and sum to exactly 1;
/// zero weights are dropped.
Cdf mixture(std::span<const Rational> weights, std::span<const Cdf> parts);
/// x -> F(x - t).
Cdf shift(const Cdf& f, const Rational& t);
/// F * G = integral of F(. - y) dG(y). Supported when at least one operand
/// is purely discrete; throws std::domain_error for two continuous parts.
Cdf convolve(const Cdf& f, const Cdf& g);

std::string describe(const Cdf& f);

}  // namespace qprok
