#include "qprok/approach.hpp"

#include <sstream>

namespace qprok::approach {

std::vector<std::size_t> diagonal_extract(const std::vector<std::vector<std::size_t>>& levels) {
  std::vector<std::size_t> out;
  if (levels.empty()) return out;
  for (std::size_t m = 0;; ++m) {
    const auto& level = levels[std::min(m, levels.size() - 1)];
    if (m >= level.size()) break;
    if (!out.empty() && level[m] <= out.back()) {
      throw std::logic_error("diagonal_extract: levels are not nested");
    }
    out.push_back(level[m]);
  }
  return out;
}

FiniteSpace::FiniteSpace(std::vector<std::vector<std::vector<Extended>>> gauges)
    : gauges_(std::move(gauges)) {
  const std::size_t n = gauges_.size();
  if (n == 0) throw std::invalid_argument("finite space needs at least one point");
  for (std::size_t x = 0; x < n; ++x) {
    if (gauges_[x].empty()) {
      throw std::invalid_argument("point " + std::to_string(x) + " has an empty basis");
    }
    for (std::size_t k = 0; k < gauges_[x].size(); ++k) {
      if (gauges_[x][k].size() != n) {
        throw std::invalid_argument("gauge " + std::to_string(k) + " at point " +
                                    std::to_string(x) + " has the wrong arity");
      }
      if (!(gauges_[x][k][x] == Extended(0))) {
        throw std::invalid_argument("gauge " + std::to_string(k) + " at point " +
                                    std::to_string(x) + " does not vanish at its center");
      }
      for (const auto& v : gauges_[x][k]) {
        if (v < Extended(0)) throw std::invalid_argument("negative gauge value");
      }
    }
  }
}

FiniteSpace FiniteSpace::from_distance(const std::vector<std::vector<Extended>>& d) {
  std::vector<std::vector<std::vector<Extended>>> gauges;
  gauges.reserve(d.size());
  for (const auto& row : d) gauges.push_back({row});
  return FiniteSpace(std::move(gauges));
}

LocalBasisSpace<std::size_t> FiniteSpace::as_space() const {
  return {[this](const std::size_t& x) { return basis_size(x); },
          [this](const std::size_t& x, std::size_t k, const std::size_t& y) {
            return gauge(x, k, y);
          }};
}

TailSequence<std::size_t> as_tail(const FiniteSpace& space, const EventuallyPeriodic& seq) {
  if (seq.cycle.empty()) throw std::invalid_argument("eventually periodic sequence needs a cycle");
  for (auto p : seq.cycle) {
    if (p >= space.size()) throw std::invalid_argument("sequence leaves the space");
  }
  return {[&space, cycle = seq.cycle](const std::size_t& x, std::size_t k) {
    Extended worst(0);
    for (auto y : cycle) worst = std::max(worst, space.gauge(x, k, y));
    return worst;
  }};
}

namespace {

// max over a in A of min over centers x of gauge[x][choice(x)][a].
Extended cover_radius(const FiniteSpace& space, const std::vector<std::size_t>& subset,
                      const std::vector<std::size_t>& choice, std::vector<CoverWitness>* witness) {
  Extended worst(0);
  if (witness) witness->clear();
  for (auto a : subset) {
    std::size_t best_center = 0;
    Extended best = Extended::infinity();
    for (std::size_t x = 0; x < space.size(); ++x) {
      const Extended& v = space.gauge(x, choice[x], a);
      if (v < best || (x == 0 && best.is_infinite())) {
        best = v;
        best_center = x;
      }
    }
    if (witness) witness->push_back({a, best_center, best});
    worst = std::max(worst, best);
  }
  return worst;
}

struct SelectionMax {
  Extended value;
  std::vector<CoverWitness> witness;
  std::size_t count = 0;
};

SelectionMax worst_selection(const FiniteSpace& space, const std::vector<std::size_t>& subset) {
  constexpr std::size_t kMaxSelections = 1'000'000;
  std::size_t total = 1;
  for (std::size_t x = 0; x < space.size(); ++x) {
    total *= space.basis_size(x);
    if (total > kMaxSelections) {
      throw std::invalid_argument("too many gauge selections to enumerate");
    }
  }
  SelectionMax out{Extended(0), {}, 0};
  std::vector<std::size_t> choice(space.size(), 0);
  std::vector<CoverWitness> witness;
  for (;;) {
    const Extended r = cover_radius(space, subset, choice, &witness);
    if (out.count == 0 || out.value < r) {
      out.value = r;
      out.witness = witness;
    }
    ++out.count;
    std::size_t x = 0;
    while (x < space.size() && ++choice[x] == space.basis_size(x)) choice[x++] = 0;
    if (x == space.size()) break;
  }
  return out;
}

// Defining predicates at radius eps, evaluated directly.
bool rsc_at(const FiniteSpace& space, const std::vector<std::size_t>& subset, const Rational& eps) {
  for (auto a : subset) {
    bool found = false;
    for (std::size_t x = 0; x < space.size() && !found; ++x) {
      bool inside = true;
      for (std::size_t k = 0; k < space.basis_size(x) && inside; ++k) {
        inside = space.gauge(x, k, a) < Extended(eps);
      }
      found = inside;
    }
    if (!found) return false;
  }
  return true;
}

bool covered_at(const FiniteSpace& space, const std::vector<std::size_t>& subset,
                const Rational& eps) {
  std::vector<std::size_t> choice(space.size(), 0);
  for (;;) {
    for (auto a : subset) {
      bool found = false;
      for (std::size_t x = 0; x < space.size() && !found; ++x) {
        found = space.gauge(x, choice[x], a) < Extended(eps);
      }
      if (!found) return false;
    }
    std::size_t x = 0;
    while (x < space.size() && ++choice[x] == space.basis_size(x)) choice[x++] = 0;
    if (x == space.size()) return true;
  }
}

}  // namespace

FiniteIndices indices_bruteforce(const FiniteSpace& space, const std::vector<std::size_t>& subset,
                                 const std::vector<Rational>& eps_grid) {
  for (auto a : subset) {
    if (a >= space.size()) {
      throw std::invalid_argument("subset point " + std::to_string(a) + " outside the space");
    }
  }
  FiniteIndices out;

  // A sequence in a finite set has a constant subsequence; it converges to x
  // at level max_k gauge(x, k, a).
  out.chi_rsc = Extended(0);
  for (auto a : subset) {
    Extended best = Extended::infinity();
    for (std::size_t x = 0; x < space.size(); ++x) {
      Extended level(0);
      for (std::size_t k = 0; k < space.basis_size(x); ++k) {
        level = std::max(level, space.gauge(x, k, a));
      }
      best = std::min(best, level);
    }
    out.chi_rsc = std::max(out.chi_rsc, best);
  }

  auto rc = worst_selection(space, subset);
  out.chi_rc = rc.value;
  out.rc_witness = std::move(rc.witness);
  out.selections_checked = rc.count;

  std::vector<std::size_t> everything(space.size());
  for (std::size_t i = 0; i < everything.size(); ++i) everything[i] = i;
  out.chi_lindelof = worst_selection(space, everything).value;

  for (const auto& eps : eps_grid) {
    if (eps <= 0) throw std::invalid_argument("eps grid must be positive");
    const Extended e(eps);
    if (rsc_at(space, subset, eps) != (out.chi_rsc < e) ||
        covered_at(space, subset, eps) != (out.chi_rc < e) ||
        covered_at(space, everything, eps) != (out.chi_lindelof < e)) {
      throw std::logic_error("indices_bruteforce: predicate disagrees with index at eps=" +
                             to_string(eps));
    }
  }
  return out;
}

Theorem22Report theorem22_check(const Bracket& rsc, const Bracket& rc, const Bracket& lindelof) {
  Theorem22Report report{rsc, rc, lindelof, {}};
  bool ok = true;
  auto check = [&](bool holds, const std::string& what) {
    report.lines.push_back(std::string(holds ? "PASS " : "FAIL ") + what);
    ok = ok && holds;
  };
  auto show = [](const Bracket& b) { return "[" + b.lower.str() + ", " + b.upper.str() + "]"; };

  check(rsc.lower <= rsc.upper, "chi_rsc bracket " + show(rsc) + " is ordered");
  check(rc.lower <= rc.upper, "chi_rc bracket " + show(rc) + " is ordered");
  check(lindelof.lower <= lindelof.upper, "chi_L bracket " + show(lindelof) + " is ordered");
  check(rsc.lower <= rc.upper,
        "chi_rsc <= chi_rc: " + rsc.lower.str() + " <= " + rc.upper.str());
  const Extended rhs = rsc.upper + lindelof.upper;
  check(rc.lower <= rhs, "chi_rc <= chi_rsc + chi_L: " + rc.lower.str() + " <= " + rhs.str());

  if (!ok) {
    std::ostringstream os;
    for (const auto& l : report.lines) os << l << '\n';
    throw ContractViolation("index chain violated:\n" + os.str());
  }
  return report;
}

}  // namespace qprok::approach
