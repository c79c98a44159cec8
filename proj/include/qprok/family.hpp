#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qprok/cdf.hpp"
#include "qprok/rational.hpp"

namespace qprok {

/// Translation schedule t_1, t_2, ... used by the tail templates.
class Schedule {
 public:
  enum class Kind {
    Linear,      // t_n = coefficient * n
    Explicit,    // listed values, then continued with the last increment
    Reciprocal,  // t_n = 1 / n
  };

  static Schedule linear(Rational coefficient);
  /// Needs at least two strictly increasing values; throws
  /// std::invalid_argument otherwise.
  static Schedule explicit_values(std::vector<Rational> values);
  static Schedule reciprocal();

  Kind kind() const { return kind_; }
  const Rational& coefficient() const { return coefficient_; }
  const std::vector<Rational>& values() const { return values_; }
  std::size_t offset() const { return offset_; }

  /// t_n for n >= 1.
  Rational at(std::size_t n) const;
  /// Smallest n with t_n > bound. Only for increasing unbounded schedules.
  std::size_t first_beyond(const Rational& bound) const;
  bool increasing_unbounded() const { return kind_ != Kind::Reciprocal; }

  /// The same schedule started at its `start`-th term.
  Schedule starting_at(std::size_t start) const;

  bool operator==(const Schedule&) const = default;

 private:
  Kind kind_ = Kind::Linear;
  Rational coefficient_ = 1;
  std::vector<Rational> values_;
  std::size_t offset_ = 0;
};

enum class TailTemplate {
  ShiftEscape,    // F_n = shift(base, t_n), t_n increasing to infinity
  MixtureEscape,  // F_n = (1 - a) base + a shift(base, t_n)
  Constant,       // F_n = base
  ShiftConverge,  // F_n = shift(base, 1/n), converging to base
};

const char* template_name(TailTemplate t);

/// Pointwise limit of a template sequence: x -> scale * base(x), or the
/// left-continuous version scale * base(x-) when `left_continuous`.
struct PointwiseLimit {
  Rational scale;
  Cdf base;
  bool left_continuous = false;

  Rational value(const Rational& x) const;
  Rational right_limit(const Rational& x) const { return scale * base(x); }
  Rational left_limit(const Rational& x) const { return scale * base.left_limit(x); }
};

/// Infinite sequence of Cdfs given by a closed-form template.
struct ParametricTail {
  TailTemplate kind = TailTemplate::Constant;
  Cdf base;
  Rational a = 0;
  Schedule t = Schedule::linear(1);
  std::size_t horizon = 128;

  /// Throws std::invalid_argument when the template and schedule do not fit
  /// together, a is outside [0, 1], or horizon is zero.
  void validate() const;

  /// F_n, n >= 1.
  Cdf member(std::size_t n) const;
  /// The same sequence started at its `start`-th member.
  ParametricTail starting_at(std::size_t start) const;

  /// sup_n max{F_n(-M), 1 - F_n(M)} for M > 0. Exact.
  Rational escape_profile(const Rational& m) const;
  /// lim_n F_n(x) for every x.
  PointwiseLimit pointwise_limit() const;
  /// limsup_n phi(center, alpha, F_n). Exact.
  Rational eventual_phi(const Cdf& center, const Rational& alpha) const;
  /// Magnitude of every coordinate that matters to escape_profile.
  Rational coordinate_scale() const;
};

/// A sequence of Cdfs presented by template.
using SequenceSpec = ParametricTail;

/// Family of Cdfs: finitely many explicit members plus template tails.
struct FamilySpec {
  std::vector<Cdf> explicit_members;
  std::vector<ParametricTail> tails;

  bool empty() const { return explicit_members.empty() && tails.empty(); }
  /// Throws std::invalid_argument when empty or a tail is invalid.
  void validate() const;
  /// sup over members of max{F(-M), 1 - F(M)}.
  Rational escape_profile(const Rational& m) const;
  /// A window M > 0 beyond which escape_profile is constant.
  Rational settled_window() const;
};

}  // namespace qprok
