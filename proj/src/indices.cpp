#include "qprok/indices.hpp"

#include <algorithm>
#include <utility>

#include "qprok/distances.hpp"

namespace qprok {

Rational escape_index(const FamilySpec& family) {
  family.validate();
  const Rational m = family.settled_window();
  const Rational value = family.escape_profile(m);
  if (family.escape_profile(Rational(2 * m)) != value) {
    throw std::logic_error("escape_index: profile not settled at M = " + to_string(m));
  }
  return value;
}

bool is_tight(const FamilySpec& family) { return escape_index(family) == 0; }

std::vector<Rational> default_alpha_grid(std::size_t depth) {
  if (depth == 0) throw std::invalid_argument("alpha grid depth must be positive");
  std::vector<Rational> grid;
  grid.reserve(depth);
  for (std::size_t n = 1; n <= depth; ++n) grid.push_back(rational(1, static_cast<long>(n)));
  return grid;
}

Rational continuity_gap(const Cdf& f, const PointwiseLimit& limit) {
  std::vector<Rational> knots = f.knots();
  const auto extra = limit.base.knots();
  knots.insert(knots.end(), extra.begin(), extra.end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  // Both sides are monotone and piecewise affine between knots, so the sup
  // over continuity points is reached at a knot or as a one-sided limit.
  Rational worst = 0;
  for (const auto& k : knots) {
    if (f.continuous_at(k)) worst = max(worst, abs(Rational(f(k) - limit.value(k))));
    worst = max(worst, abs(Rational(f(k) - limit.right_limit(k))));
    worst = max(worst, abs(Rational(f.left_limit(k) - limit.left_limit(k))));
  }
  return worst;
}

IndexBracket limit_operator(const SequenceSpec& seq, const Cdf& f,
                            const std::vector<Rational>& alpha_grid) {
  seq.validate();
  if (alpha_grid.empty()) throw std::invalid_argument("limit_operator: empty alpha grid");
  IndexBracket out;
  out.lower = 0;
  Rational best_alpha = alpha_grid.front();
  for (const auto& alpha : alpha_grid) {
    const Rational v = seq.eventual_phi(f, alpha);
    if (v > out.lower) {
      out.lower = v;
      best_alpha = alpha;
    }
  }
  out.lower_witness =
      "limsup phi at alpha=" + to_string(best_alpha) + " is " + to_string(out.lower);
  out.upper = continuity_gap(f, seq.pointwise_limit());
  if (out.lower > out.upper) {
    throw std::logic_error("limit_operator: lower end " + to_string(out.lower) +
                           " exceeds exact value " + to_string(out.upper));
  }
  return out;
}

namespace {

// The pointwise limit restricted to [-M, M): mass below -M moves to -M,
// mass at or above M moves to M.
Cdf truncate_limit(const PointwiseLimit& limit, const Rational& m) {
  const Rational neg = -m;
  std::vector<Jump> jumps;
  std::vector<Segment> segments;
  const Rational below = limit.scale * limit.base(neg);
  jumps.push_back({neg, below});
  for (const auto& j : limit.base.jumps()) {
    if (j.location > neg && j.location < m) jumps.push_back({j.location, limit.scale * j.mass});
  }
  for (const auto& s : limit.base.segments()) {
    const Rational l = max(s.left, neg);
    const Rational r = min(s.right, m);
    if (l < r) segments.push_back({l, r, Rational(limit.scale * s.density() * (r - l))});
  }
  const Rational inside = limit.scale * limit.base.left_limit(m);
  jumps.push_back({m, Rational(1 - inside)});
  std::erase_if(jumps, [](const Jump& j) { return j.mass == 0; });
  std::erase_if(segments, [](const Segment& s) { return s.mass == 0; });
  return Cdf::from_parts(std::move(jumps), std::move(segments));
}

FamilySpec single_tail(const SequenceSpec& seq) { return FamilySpec{{}, {seq}}; }

}  // namespace

HellyResult helly_select(const SequenceSpec& seq, const SupportBound& window,
                         const Rational& grid_step, const Rational& eps) {
  seq.validate();
  if (!(window.high > 0) || window.low != -window.high) {
    throw std::invalid_argument("helly_select needs a symmetric window [-M, M) with M > 0");
  }
  if (grid_step <= 0) throw std::invalid_argument("helly_select: grid step must be positive");
  if (eps <= 0) throw std::invalid_argument("helly_select: eps must be positive");

  const Rational& m = window.high;
  const Rational escape_bound = seq.escape_profile(m);
  const Rational chi = escape_index(single_tail(seq));
  if (escape_bound > chi + eps) {
    throw std::invalid_argument("helly_select: window M = " + to_string(m) +
                                " leaves escape mass " + to_string(escape_bound) +
                                " above index " + to_string(chi) + " + eps");
  }

  std::vector<Cdf> members;
  members.reserve(seq.horizon);
  for (std::size_t n = 1; n <= seq.horizon; ++n) members.push_back(seq.member(n));

  const PointwiseLimit limit = seq.pointwise_limit();
  const Rational tol = eps / 2;
  std::vector<std::size_t> current(seq.horizon);
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i + 1;
  std::vector<std::vector<std::size_t>> levels{current};

  for (Rational x = window.low; x < m; x += grid_step) {
    const Rational target = limit.value(x);
    std::size_t p = current.size();
    while (p > 0 && abs(Rational(members[current[p - 1] - 1](x) - target)) <= tol) --p;
    if (p == current.size()) {
      throw SelectionError("helly_select: values at grid point x = " + to_string(x) +
                               " did not settle within the horizon of " +
                               std::to_string(seq.horizon) + " members",
                           x);
    }
    current.erase(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(p));
    levels.push_back(current);
  }

  HellyResult out{approach::diagonal_extract(levels), truncate_limit(limit, m), 0, window,
                  escape_bound};
  out.lambda_bound = limit_operator(seq, out.limit, default_alpha_grid()).upper;
  if (out.lambda_bound > escape_bound) {
    throw approach::ContractViolation("helly_select: limit operator " +
                                      to_string(out.lambda_bound) + " exceeds escape mass " +
                                      to_string(escape_bound));
  }
  return out;
}

std::vector<SequenceSpec> bracket_runs(const FamilySpec& family) {
  std::vector<SequenceSpec> runs;
  for (const auto& f : family.explicit_members) {
    runs.push_back(SequenceSpec{TailTemplate::Constant, f, 0, Schedule::linear(1), 8});
  }
  for (const auto& tail : family.tails) {
    runs.push_back(tail);
    if (tail.horizon / 2 > 1) runs.push_back(tail.starting_at(tail.horizon / 2));
  }
  return runs;
}

IndexBracket prokhorov_bracket(const FamilySpec& family, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("prokhorov_bracket: eps must be positive");
  const Rational chi = escape_index(family);
  const Rational m = family.settled_window();

  IndexBracket out;
  out.lower = chi;
  out.lower_witness = "sup max{F(-M), 1 - F(M)} at M=" + to_string(m) + " is " + to_string(chi);
  out.upper = 0;

  for (const auto& run : bracket_runs(family)) {
    HellyResult h = helly_select(run, {Rational(-m), m}, Rational(m / 8), eps);
    if (!out.upper_witness || h.lambda_bound > out.upper) {
      out.upper = max(out.upper, h.lambda_bound);
      out.upper_witness = std::move(h);
    }
  }
  return out;
}

bool weak_rsc_flag(const FamilySpec& family, const Rational& eps) {
  return prokhorov_bracket(family, eps).upper <= eps;
}

namespace {

// Mass of each segment pushed to the right ends of pieces no wider than
// `width`; jumps stay.
Cdf staircase(const Cdf& f, const Rational& width) {
  std::vector<Jump> jumps(f.jumps().begin(), f.jumps().end());
  for (const auto& s : f.segments()) {
    const Rational pieces = ceil(Rational((s.right - s.left) / width));
    const unsigned long k = std::max(1UL, pieces.get_num().get_ui());
    const Rational w = (s.right - s.left) / k;
    const Rational part = s.mass / k;
    for (unsigned long i = 1; i <= k; ++i) jumps.push_back({Rational(s.left + w * i), part});
  }
  return Cdf::from_parts(std::move(jumps), {});
}

}  // namespace

LindelofWitness lindelof_witness(std::span<const Cdf> test_set, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("lindelof_witness: eps must be positive");
  if (test_set.empty()) throw std::invalid_argument("lindelof_witness: empty test set");
  LindelofWitness out{{}, eps, 0};
  for (const auto& f : test_set) {
    Cdf c = staircase(f, eps);
    if (std::find(out.centers.begin(), out.centers.end(), c) == out.centers.end()) {
      out.centers.push_back(std::move(c));
    }
  }
  for (const auto& f : test_set) {
    Rational best = 1;
    for (const auto& c : out.centers) best = min(best, phi(c, eps, f));
    out.level = max(out.level, best);
  }
  if (!(out.level < eps)) {
    throw approach::ContractViolation("lindelof_witness: cover level " + to_string(out.level) +
                                      " is not below eps " + to_string(eps));
  }
  return out;
}

approach::LocalBasisSpace<Cdf> cdf_space(std::size_t depth) {
  if (depth == 0) throw std::invalid_argument("cdf_space: depth must be positive");
  return {[depth](const Cdf&) { return depth; },
          [](const Cdf& f, std::size_t k, const Cdf& g) {
            return approach::Extended(phi(f, rational(1, static_cast<long>(k + 1)), g));
          }};
}

approach::TailSequence<Cdf> as_tail(const SequenceSpec& seq) {
  seq.validate();
  return {[seq](const Cdf& f, std::size_t k) {
    return approach::Extended(seq.eventual_phi(f, rational(1, static_cast<long>(k + 1))));
  }};
}

CdfTheorem22 cdf_theorem22(const FamilySpec& family, const Rational& eps,
                           std::span<const Cdf> extra_test_set) {
  IndexBracket rsc = prokhorov_bracket(family, eps);

  std::vector<Cdf> test(family.explicit_members.begin(), family.explicit_members.end());
  for (const auto& tail : family.tails) {
    for (std::size_t n = 1; n <= std::min<std::size_t>(tail.horizon, 8); ++n) {
      test.push_back(tail.member(n));
    }
  }
  if (rsc.upper_witness) test.push_back(rsc.upper_witness->limit);
  test.insert(test.end(), extra_test_set.begin(), extra_test_set.end());
  LindelofWitness lw = lindelof_witness(test, eps);

  const approach::Bracket b_rsc{rsc.lower, rsc.upper};
  const approach::Bracket b_l{approach::Extended(0), lw.level};
  const approach::Bracket b_rc{rsc.lower, approach::Extended(Rational(rsc.upper + lw.level))};
  approach::Theorem22Report report = approach::theorem22_check(b_rsc, b_rc, b_l);
  return {std::move(report), std::move(rsc), std::move(lw)};
}

}  // namespace qprok
