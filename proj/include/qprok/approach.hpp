#pragma once

// Approach-space kernel: spaces presented through countable local gauge
// bases, balls, eps-convergence, the limit operator and the three compactness
// indices, plus exhaustive computation on finite spaces.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprok/rational.hpp"

namespace qprok::approach {

/// Thrown when a certified inequality that must hold is found violated.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonnegative rational or +infinity.
class Extended {
 public:
  Extended() = default;
  Extended(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
  Extended(long value) : value_(value) {}                 // NOLINT(implicit)
  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  /// Throws std::domain_error when infinite.
  const Rational& value() const {
    if (infinite_) throw std::domain_error("Extended::value on infinity");
    return value_;
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const Extended& a, const Extended& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
  friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
  friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }
  friend Extended operator+(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Extended(Rational(a.value_ + b.value_));
  }

  std::string str() const { return infinite_ ? "inf" : to_string(value_); }

 private:
  bool infinite_ = false;
  Rational value_ = 0;
};

struct Bracket {
  Extended lower;
  Extended upper;
};

/// Point set with, at every point, a countable basis of gauges indexed
/// 0, 1, 2, ... . `gauge(x, k, x)` must be 0.
template <class Point>
struct LocalBasisSpace {
  std::function<std::size_t(const Point&)> basis_size;
  std::function<Extended(const Point& center, std::size_t k, const Point& y)> gauge;
};

template <class Point>
struct Ball {
  Point center;
  std::size_t gauge_index = 0;
  Rational radius;
};

/// y lies in the ball iff its gauge value is strictly below the radius.
template <class Point>
bool ball_contains(const LocalBasisSpace<Point>& space, const Ball<Point>& ball, const Point& y) {
  if (ball.radius <= 0) throw std::invalid_argument("ball radius must be positive");
  return space.gauge(ball.center, ball.gauge_index, y) < Extended(ball.radius);
}

/// A sequence whose eventual behaviour against every basis gauge is known:
/// `limsup_gauge(x, k)` is limsup_n gauge(x, k, x_n).
template <class Point>
struct TailSequence {
  std::function<Extended(const Point& center, std::size_t k)> limsup_gauge;
};

/// Every ball of radius eps around x built from the first `basis_prefix`
/// basis gauges eventually contains the sequence. Decided as
/// limsup < eps per gauge, which is exact for eventually constant gauge
/// values and conservative on the boundary otherwise.
template <class Point>
bool eps_convergent(const LocalBasisSpace<Point>& space, const TailSequence<Point>& seq,
                    const Point& x, const Rational& eps, std::size_t basis_prefix) {
  if (eps <= 0) throw std::invalid_argument("eps_convergent: eps must be positive");
  const std::size_t depth = std::min(basis_prefix, space.basis_size(x));
  for (std::size_t k = 0; k < depth; ++k) {
    if (!(seq.limsup_gauge(x, k) < Extended(eps))) return false;
  }
  return true;
}

/// Limit operator of the sequence at x over the truncated basis, found by
/// bisecting the monotone eps_convergent predicate over the grid together
/// with the eventual gauge values (the only places the predicate can flip).
/// Exact when every eventual gauge value is finite, [largest candidate, inf]
/// otherwise.
template <class Point>
Bracket limit_operator_generic(const LocalBasisSpace<Point>& space,
                               const TailSequence<Point>& seq, const Point& x,
                               const std::vector<Rational>& grid, std::size_t basis_prefix) {
  if (grid.empty()) throw std::invalid_argument("limit_operator_generic: empty grid");
  std::vector<Rational> cand(grid.begin(), grid.end());
  cand.push_back(0);
  const std::size_t depth = std::min(basis_prefix, space.basis_size(x));
  std::vector<Rational> breakpoints;
  bool finite = true;
  for (std::size_t k = 0; k < depth; ++k) {
    const Extended v = seq.limsup_gauge(x, k);
    if (v.is_infinite()) {
      finite = false;
    } else {
      breakpoints.push_back(v.value());
    }
  }
  cand.insert(cand.end(), breakpoints.begin(), breakpoints.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // Every eps above the largest finite limsup converges.
  if (finite) cand.push_back(cand.back() + 1);

  auto converges = [&](const Rational& e) {
    return e > 0 && eps_convergent(space, seq, x, e, basis_prefix);
  };
  // cand[0] == 0 never converges; find the last failing candidate.
  if (!converges(cand.back())) return {Extended(cand.back()), Extended::infinity()};
  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (converges(cand[mid])) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // The largest finite limsup is a candidate and the last one that fails.
  return {Extended(cand[lo]), Extended(cand[lo])};
}

/// Diagonal of nested index sets: element m is the m-th entry of level
/// min(m, last). Strictly increasing when each level is a subset of the one
/// before. Throws std::logic_error otherwise.
std::vector<std::size_t> diagonal_extract(const std::vector<std::vector<std::size_t>>& levels);

// ---------------------------------------------------------------------------
// Finite spaces

/// Finite space with points 0..n-1; gauges[x][k][y] is the k-th basis gauge
/// at x evaluated at y.
class FiniteSpace {
 public:
  /// Throws std::invalid_argument on ragged tables, empty bases or a gauge
  /// that does not vanish at its center.
  explicit FiniteSpace(std::vector<std::vector<std::vector<Extended>>> gauges);
  /// One gauge per point: y -> d(x, y).
  static FiniteSpace from_distance(const std::vector<std::vector<Extended>>& d);

  std::size_t size() const { return gauges_.size(); }
  std::size_t basis_size(std::size_t x) const { return gauges_.at(x).size(); }
  const Extended& gauge(std::size_t x, std::size_t k, std::size_t y) const {
    return gauges_.at(x).at(k).at(y);
  }
  LocalBasisSpace<std::size_t> as_space() const;

 private:
  std::vector<std::vector<std::vector<Extended>>> gauges_;
};

/// Sequence prefix, then `cycle` repeated forever.
struct EventuallyPeriodic {
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
};

TailSequence<std::size_t> as_tail(const FiniteSpace& space, const EventuallyPeriodic& seq);

struct CoverWitness {
  std::size_t point;   // covered point
  std::size_t center;  // ball center covering it
  Extended value;      // gauge value at the covered point
};

struct FiniteIndices {
  Extended chi_rsc;
  Extended chi_rc;
  Extended chi_lindelof;
  /// Covers realizing chi_rc under the worst gauge selection.
  std::vector<CoverWitness> rc_witness;
  std::size_t selections_checked = 0;
};

/// Exact indices by enumeration. chi_rsc uses constant subsequences, chi_rc
/// and chi_L enumerate every selection of one basis gauge per point. Each
/// grid radius is re-checked against the defining predicate. Throws
/// std::invalid_argument for points outside the space or too many
/// selections to enumerate.
FiniteIndices indices_bruteforce(const FiniteSpace& space, const std::vector<std::size_t>& subset,
                                 const std::vector<Rational>& eps_grid);

// ---------------------------------------------------------------------------

struct Theorem22Report {
  Bracket rsc;
  Bracket rc;
  Bracket lindelof;
  std::vector<std::string> lines;
};

/// Checks chi_rsc <= chi_rc <= chi_rsc + chi_L bracket-wise: the lower end of
/// each left side must not exceed the upper end of its right side. Throws
/// ContractViolation, carrying the report text, on any violation.
Theorem22Report theorem22_check(const Bracket& rsc, const Bracket& rc, const Bracket& lindelof);

}  // namespace qprok::approach
