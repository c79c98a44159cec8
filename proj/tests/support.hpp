#pragma once

// Seeded generators and independent reference computations for the tests.
// Oracles here only read a Cdf's raw jumps and segments.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qprok/cdf.hpp"
#include "qprok/rational.hpp"

namespace qprok::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(int one_in = 2) { return integer(0, one_in - 1) == 0; }
  Rational grid(long lo, long hi, long den) { return rational(integer(lo * den, hi * den), den); }

  /// Point masses on the grid k/den, k/den in [-span, span].
  Cdf discrete(int max_jumps = 4, long span = 2, long den = 4) {
    const int k = static_cast<int>(integer(1, max_jumps));
    std::vector<long> w(static_cast<std::size_t>(k));
    long total = 0;
    for (auto& x : w) total += x = integer(1, 6);
    std::vector<Jump> jumps;
    for (int i = 0; i < k; ++i) {
      jumps.push_back({grid(-span, span, den), rational(w[static_cast<std::size_t>(i)], total)});
    }
    return Cdf::from_parts(std::move(jumps), {});
  }

  /// Jumps and uniform pieces mixed.
  Cdf mixed(int max_parts = 4, long span = 2, long den = 4) {
    const int k = static_cast<int>(integer(1, max_parts));
    std::vector<long> w(static_cast<std::size_t>(k));
    long total = 0;
    for (auto& x : w) total += x = integer(1, 6);
    std::vector<Jump> jumps;
    std::vector<Segment> segs;
    for (int i = 0; i < k; ++i) {
      const Rational m = rational(w[static_cast<std::size_t>(i)], total);
      const Rational at = grid(-span, span, den);
      if (coin()) {
        segs.push_back({at, Rational(at + rational(integer(1, 2 * den), den)), m});
      } else {
        jumps.push_back({at, m});
      }
    }
    return Cdf::from_parts(std::move(jumps), std::move(segs));
  }

  Cdf any() { return coin() ? discrete() : mixed(); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// F(x) from the raw parts.
inline Rational eval_oracle(const Cdf& f, const Rational& x) {
  Rational v = 0;
  for (const auto& j : f.jumps()) {
    if (j.location <= x) v += j.mass;
  }
  for (const auto& s : f.segments()) {
    if (x >= s.right) {
      v += s.mass;
    } else if (x > s.left) {
      v += s.mass * (x - s.left) / (s.right - s.left);
    }
  }
  return v;
}

inline Rational left_oracle(const Cdf& f, const Rational& x) {
  Rational v = eval_oracle(f, x);
  for (const auto& j : f.jumps()) {
    if (j.location == x) v -= j.mass;
  }
  return v;
}

inline std::vector<Rational> raw_knots(const Cdf& f) {
  std::vector<Rational> k;
  for (const auto& j : f.jumps()) k.push_back(j.location);
  for (const auto& s : f.segments()) {
    k.push_back(s.left);
    k.push_back(s.right);
  }
  return k;
}

/// sup over the reals of h, where h is affine between consecutive points of
/// `breaks` and constant outside them. One-sided limits are read off by
/// affine extrapolation from two nearby samples.
inline Rational sup_piecewise(const std::function<Rational(const Rational&)>& h,
                              std::vector<Rational> breaks) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.empty()) return h(Rational(0));
  Rational delta = 1;
  for (std::size_t i = 1; i < breaks.size(); ++i) delta = min(delta, Rational(breaks[i] - breaks[i - 1]));
  delta /= 4;
  Rational best = h(Rational(breaks.front() - 1));
  for (const auto& p : breaks) {
    best = max(best, h(p));
    best = max(best, Rational(2 * h(Rational(p - delta)) - h(Rational(p - 2 * delta))));
    best = max(best, Rational(2 * h(Rational(p + delta)) - h(Rational(p + 2 * delta))));
  }
  return best;
}

inline std::vector<Rational> shifted(const std::vector<Rational>& v, const Rational& t) {
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(x + t);
  return out;
}

inline std::vector<Rational> joined(std::initializer_list<std::vector<Rational>> parts) {
  std::vector<Rational> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline Rational uniform_oracle(const Cdf& f, const Cdf& g) {
  const auto b = joined({raw_knots(f), raw_knots(g)});
  const Rational a = sup_piecewise([&](const Rational& x) -> Rational { return eval_oracle(f, x) - eval_oracle(g, x); }, b);
  const Rational c = sup_piecewise([&](const Rational& x) -> Rational { return eval_oracle(g, x) - eval_oracle(f, x); }, b);
  return max(a, c);
}

/// sup_x max{F(x - s) - G(x), G(x) - F(x + s)} clamped at 0.
inline Rational shift_gap_oracle(const Cdf& f, const Rational& s, const Cdf& g) {
  const auto kf = raw_knots(f);
  const auto b = joined({raw_knots(g), shifted(kf, s), shifted(kf, Rational(-s))});
  const Rational a =
      sup_piecewise([&](const Rational& x) -> Rational { return eval_oracle(f, Rational(x - s)) - eval_oracle(g, x); }, b);
  const Rational c =
      sup_piecewise([&](const Rational& x) -> Rational { return eval_oracle(g, x) - eval_oracle(f, Rational(x + s)); }, b);
  return max(Rational(0), max(a, c));
}

inline Rational phi_oracle(const Cdf& f, const Rational& alpha, const Cdf& g) {
  return shift_gap_oracle(f, alpha, g);
}

inline Rational psi_oracle(const Cdf& f, const std::vector<Rational>& net, const Cdf& g) {
  Rational v = 0;
  for (const auto& p : net) v = max(v, abs(Rational(eval_oracle(f, p) - eval_oracle(g, p))));
  return v;
}

inline bool levy_feasible_oracle(const Rational& gamma, const Cdf& f, const Cdf& g,
                                 const Rational& alpha) {
  return shift_gap_oracle(f, Rational(gamma * alpha), g) <= alpha;
}

/// Bisection on [0, 1] with the reference feasibility test; the metric lies
/// in (lo, hi].
inline std::pair<Rational, Rational> levy_oracle(const Rational& gamma, const Cdf& f,
                                                 const Cdf& g, int iterations = 30) {
  Rational lo = 0;
  Rational hi = 1;
  if (f == g) return {0, 0};
  for (int i = 0; i < iterations; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (levy_feasible_oracle(gamma, f, g, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

/// (F * G)(x) for discrete F: sum of m_j G(x - a_j).
inline Rational convolve_eval_oracle(const Cdf& f, const Cdf& g, const Rational& x) {
  Rational v = 0;
  for (const auto& j : f.jumps()) v += j.mass * eval_oracle(g, Rational(x - j.location));
  return v;
}

}  // namespace qprok::testing
