#include "qprok/family.hpp"

#include <array>
#include <stdexcept>

#include "qprok/distances.hpp"

namespace qprok {

Schedule Schedule::linear(Rational coefficient) {
  if (coefficient <= 0) {
    throw std::invalid_argument("linear schedule needs a positive coefficient, got " +
                                to_string(coefficient));
  }
  Schedule s;
  s.kind_ = Kind::Linear;
  s.coefficient_ = std::move(coefficient);
  return s;
}

Schedule Schedule::explicit_values(std::vector<Rational> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("explicit schedule needs at least two locations");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) {
      throw std::invalid_argument("tail locations must be strictly increasing: t[" +
                                  std::to_string(i) + "] = " + to_string(values[i]) +
                                  " after " + to_string(values[i - 1]));
    }
  }
  Schedule s;
  s.kind_ = Kind::Explicit;
  s.values_ = std::move(values);
  return s;
}

Schedule Schedule::reciprocal() {
  Schedule s;
  s.kind_ = Kind::Reciprocal;
  return s;
}

Rational Schedule::at(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("schedule index starts at 1");
  const std::size_t m = n + offset_;
  switch (kind_) {
    case Kind::Linear:
      return coefficient_ * static_cast<unsigned long>(m);
    case Kind::Reciprocal:
      return rational(1, static_cast<long>(m));
    case Kind::Explicit: {
      const std::size_t len = values_.size();
      if (m <= len) return values_[m - 1];
      const Rational step = values_[len - 1] - values_[len - 2];
      return values_[len - 1] + step * static_cast<unsigned long>(m - len);
    }
  }
  throw std::logic_error("unknown schedule kind");
}

std::size_t Schedule::first_beyond(const Rational& bound) const {
  if (!increasing_unbounded()) {
    throw std::logic_error("first_beyond on a bounded schedule");
  }
  std::size_t hi = 1;
  while (at(hi) <= bound) hi *= 2;
  std::size_t lo = hi / 2;  // at(lo) <= bound, or lo == 0
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (at(mid) > bound) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Schedule Schedule::starting_at(std::size_t start) const {
  if (start == 0) throw std::invalid_argument("schedule start index is 1-based");
  Schedule s = *this;
  s.offset_ += start - 1;
  return s;
}

const char* template_name(TailTemplate t) {
  switch (t) {
    case TailTemplate::ShiftEscape:
      return "shift-escape";
    case TailTemplate::MixtureEscape:
      return "mixture-escape";
    case TailTemplate::Constant:
      return "constant";
    case TailTemplate::ShiftConverge:
      return "shift-converge";
  }
  return "?";
}

Rational PointwiseLimit::value(const Rational& x) const {
  return left_continuous ? left_limit(x) : right_limit(x);
}

void ParametricTail::validate() const {
  if (horizon == 0) throw std::invalid_argument("tail horizon must be positive");
  if (a < 0 || a > 1) throw std::invalid_argument("tail weight a must lie in [0, 1]");
  switch (kind) {
    case TailTemplate::ShiftEscape:
    case TailTemplate::MixtureEscape:
      if (!t.increasing_unbounded()) {
        throw std::invalid_argument(std::string(template_name(kind)) +
                                    " needs increasing unbounded locations (t = \"n\", \"2n\" "
                                    "or an explicit list)");
      }
      break;
    case TailTemplate::ShiftConverge:
      if (t.kind() != Schedule::Kind::Reciprocal) {
        throw std::invalid_argument("shift-converge needs t = \"1/n\"");
      }
      break;
    case TailTemplate::Constant:
      break;
  }
}

Cdf ParametricTail::member(std::size_t n) const {
  switch (kind) {
    case TailTemplate::ShiftEscape:
    case TailTemplate::ShiftConverge:
      return shift(base, t.at(n));
    case TailTemplate::MixtureEscape: {
      if (a == 0) return base;
      if (a == 1) return shift(base, t.at(n));
      const std::array<Rational, 2> w{Rational(1 - a), a};
      const std::array<Cdf, 2> parts{base, shift(base, t.at(n))};
      return mixture(w, parts);
    }
    case TailTemplate::Constant:
      return base;
  }
  throw std::logic_error("unknown tail template");
}

ParametricTail ParametricTail::starting_at(std::size_t start) const {
  ParametricTail out = *this;
  out.t = t.starting_at(start);
  return out;
}

Rational ParametricTail::escape_profile(const Rational& m) const {
  if (m <= 0) throw std::invalid_argument("escape window must be positive");
  const Rational neg = -m;
  switch (kind) {
    case TailTemplate::ShiftEscape:
      // 1 - F_n(M) -> 1 as the mass moves past M.
      return 1;
    case TailTemplate::MixtureEscape: {
      // F_n(-M) is largest at n = 1; 1 - F_n(M) increases to its limit.
      const Rational low = (1 - a) * base(neg) + a * base(Rational(neg - t.at(1)));
      const Rational high = 1 - (1 - a) * base(m);
      return max(low, high);
    }
    case TailTemplate::Constant:
      return max(base(neg), Rational(1 - base(m)));
    case TailTemplate::ShiftConverge: {
      // t_n decreases to 0: F_n(-M) increases to base(-M-), 1 - F_n(M) is
      // largest at n = 1.
      const Rational low = base.left_limit(neg);
      const Rational high = 1 - base(Rational(m - t.at(1)));
      return max(low, high);
    }
  }
  throw std::logic_error("unknown tail template");
}

PointwiseLimit ParametricTail::pointwise_limit() const {
  switch (kind) {
    case TailTemplate::ShiftEscape:
      return {0, base, false};
    case TailTemplate::MixtureEscape:
      return {1 - a, base, false};
    case TailTemplate::Constant:
      return {1, base, false};
    case TailTemplate::ShiftConverge:
      return {1, base, true};
  }
  throw std::logic_error("unknown tail template");
}

Rational ParametricTail::eventual_phi(const Cdf& center, const Rational& alpha) const {
  if (alpha <= 0) throw std::invalid_argument("eventual_phi: alpha must be positive");
  switch (kind) {
    case TailTemplate::Constant:
      return phi(center, alpha, base);
    case TailTemplate::ShiftEscape:
    case TailTemplate::MixtureEscape: {
      // Once the escaping copy starts past every knot of the center (shifted
      // by alpha) and of the base, phi(center, alpha, F_n) no longer depends
      // on n.
      const SupportBound c = center.support();
      const SupportBound b = base.support();
      const Rational reach = abs(c.high) + abs(b.high) + abs(b.low) + alpha + 1;
      const std::size_t n = t.first_beyond(reach);
      Rational value = phi(center, alpha, member(n));
      const std::size_t later = t.first_beyond(2 * reach);
      if (phi(center, alpha, member(later)) != value) {
        throw std::logic_error("eventual_phi: template did not settle");
      }
      return value;
    }
    case TailTemplate::ShiftConverge: {
      // phi(center, alpha, shift(base, tau)) is affine in tau near 0+ up to
      // the first positive breakpoint f +- alpha - b.
      Rational first = 1;
      for (const auto& f : center.knots()) {
        for (const auto& k : base.knots()) {
          for (const Rational& cand : {Rational(f + alpha - k), Rational(f - alpha - k)}) {
            if (cand > 0 && cand < first) first = cand;
          }
        }
      }
      return right_limit_of_max(
          [&](const Rational& tau) { return gap_candidates(center, alpha, shift(base, tau)); }, 0,
          first);
    }
  }
  throw std::logic_error("unknown tail template");
}

Rational ParametricTail::coordinate_scale() const {
  Rational scale = 0;
  for (const auto& k : base.knots()) scale = max(scale, abs(k));
  return scale + abs(t.at(1)) + 1;
}

void FamilySpec::validate() const {
  if (empty()) throw std::invalid_argument("family is empty");
  for (const auto& tail : tails) tail.validate();
}

Rational FamilySpec::escape_profile(const Rational& m) const {
  if (m <= 0) throw std::invalid_argument("escape window must be positive");
  Rational worst = 0;
  for (const auto& f : explicit_members) {
    worst = max(worst, f(Rational(-m)));
    worst = max(worst, Rational(1 - f(m)));
  }
  for (const auto& tail : tails) worst = max(worst, tail.escape_profile(m));
  return worst;
}

Rational FamilySpec::settled_window() const {
  Rational m = 1;
  for (const auto& f : explicit_members) {
    for (const auto& k : f.knots()) m = max(m, Rational(abs(k) + 1));
  }
  for (const auto& tail : tails) m = max(m, tail.coordinate_scale());
  return m;
}

}  // namespace qprok
