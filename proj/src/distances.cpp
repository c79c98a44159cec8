#include "qprok/distances.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace qprok {

namespace {

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// inf{y : F(y) > level}, for 0 <= level < 1.
Rational upper_crossing(const Cdf& f, const Rational& level) {
  const auto& knots = f.knots();
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Rational& k = knots[i];
    if (f(k) <= level) continue;
    const Rational before = f.left_limit(k);
    if (i == 0 || before <= level) return k;
    // Crosses inside the affine stretch (knots[i-1], k).
    const Rational& prev = knots[i - 1];
    const Rational at_prev = f(prev);
    const Rational slope = (before - at_prev) / (k - prev);
    return prev + (level - at_prev) / slope;
  }
  throw std::logic_error("upper_crossing: level not below 1");
}

// inf{y : F(y) >= level}, for 0 < level <= 1.
Rational lower_crossing(const Cdf& f, const Rational& level) {
  const auto& knots = f.knots();
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Rational& k = knots[i];
    if (f(k) < level) continue;
    const Rational before = f.left_limit(k);
    if (i == 0 || before < level) return k;
    const Rational& prev = knots[i - 1];
    const Rational at_prev = f(prev);
    const Rational slope = (before - at_prev) / (k - prev);
    return prev + (level - at_prev) / slope;
  }
  throw std::logic_error("lower_crossing: level above 1");
}

}  // namespace

FNet::FNet(std::vector<Rational> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("F-net must be nonempty");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i - 1] < points_[i])) {
      throw std::invalid_argument("F-net points must be strictly increasing (at index " +
                                  std::to_string(i) + ")");
    }
  }
}

FNet FNet::for_center(const Cdf& center, std::vector<Rational> points) {
  FNet net(std::move(points));
  for (const auto& p : net.points_) {
    if (!center.continuous_at(p)) {
      throw std::invalid_argument("F-net point " + to_string(p) + " is a jump of the center");
    }
  }
  return net;
}

bool FNet::valid_for(const Cdf& center) const {
  return std::all_of(points_.begin(), points_.end(),
                     [&](const Rational& p) { return center.continuous_at(p); });
}

Rational uniform_distance(const Cdf& f, const Cdf& g) {
  std::vector<Rational> knots = f.knots();
  knots.insert(knots.end(), g.knots().begin(), g.knots().end());
  sort_unique(knots);
  Rational best = 0;
  for (const auto& k : knots) {
    best = max(best, abs(f(k) - g(k)));
    best = max(best, abs(f.left_limit(k) - g.left_limit(k)));
  }
  return best;
}

std::vector<Rational> gap_candidates(const Cdf& f, const Rational& s, const Cdf& g) {
  std::vector<Rational> out;
  out.reserve(4 * (f.knots().size() + g.knots().size()));
  for (const auto& k : g.knots()) {
    const Rational lo = k - s;
    const Rational hi = k + s;
    const Rational gk = g(k);
    const Rational gk_left = g.left_limit(k);
    out.push_back(f(lo) - gk);
    out.push_back(f.left_limit(lo) - gk_left);
    out.push_back(gk - f(hi));
    out.push_back(gk_left - f.left_limit(hi));
  }
  for (const auto& k : f.knots()) {
    const Rational lo = k - s;
    const Rational hi = k + s;
    const Rational fk = f(k);
    const Rational fk_left = f.left_limit(k);
    out.push_back(fk - g(hi));
    out.push_back(fk_left - g.left_limit(hi));
    out.push_back(g(lo) - fk);
    out.push_back(g.left_limit(lo) - fk_left);
  }
  return out;
}

Rational shift_gap(const Cdf& f, const Rational& s, const Cdf& g) {
  if (s < 0) throw std::invalid_argument("shift_gap: negative shift " + to_string(s));
  Rational best = 0;
  for (auto& v : gap_candidates(f, s, g)) best = max(best, v);
  return best;
}

std::vector<Rational> gap_breakpoints(const Cdf& f, const Cdf& g) {
  std::vector<Rational> out;
  for (const auto& a : f.knots()) {
    for (const auto& b : g.knots()) {
      if (a != b) out.push_back(abs(a - b));
    }
  }
  sort_unique(out);
  return out;
}

Rational right_limit_of_max(const std::function<std::vector<Rational>(const Rational&)>& c,
                            const Rational& t0, const Rational& t1) {
  if (!(t0 < t1)) throw std::invalid_argument("right_limit_of_max: empty interval");
  const Rational width = t1 - t0;
  const Rational ta = t0 + width / 3;
  const Rational tb = t0 + 2 * width / 3;
  const auto va = c(ta);
  const auto vb = c(tb);
  if (va.size() != vb.size()) throw std::logic_error("right_limit_of_max: unstable candidates");
  Rational best = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Rational slope = (vb[i] - va[i]) / (tb - ta);
    best = max(best, Rational(va[i] - slope * (ta - t0)));
  }
  return best;
}

Rational phi(const Cdf& f, const Rational& alpha, const Cdf& g) {
  if (alpha <= 0) throw std::invalid_argument("phi: alpha must be positive");
  return shift_gap(f, alpha, g);
}

Rational psi(const Cdf& f, const FNet& net, const Cdf& g) {
  Rational best = 0;
  for (const auto& p : net.points()) {
    if (!f.continuous_at(p)) {
      throw std::invalid_argument("psi: net point " + to_string(p) + " is a jump of the center");
    }
    best = max(best, abs(f(p) - g(p)));
  }
  return best;
}

bool levy_feasible(const Rational& gamma, const Cdf& f, const Cdf& g, const Rational& alpha) {
  if (gamma <= 0) throw std::invalid_argument("levy: gamma must be positive");
  if (alpha < 0) return false;
  return shift_gap(f, gamma * alpha, g) <= alpha;
}

Rational levy(const Rational& gamma, const Cdf& f, const Cdf& g) {
  if (gamma <= 0) throw std::invalid_argument("levy: gamma must be positive");

  // Feasibility is monotone in alpha and always holds at alpha = 1. Between
  // consecutive candidates every gap term is affine in alpha.
  std::vector<Rational> cand{Rational(0), Rational(1)};
  for (const auto& b : gap_breakpoints(f, g)) {
    Rational a = b / gamma;
    if (a < 1) cand.push_back(std::move(a));
  }
  sort_unique(cand);

  auto feasible = [&](const Rational& a) { return shift_gap(f, gamma * a, g) <= a; };
  if (feasible(cand.front())) return 0;

  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(cand[mid])) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const Rational& left = cand[lo];
  const Rational& right = cand[hi];

  // On (left, right): feasible iff a_i + b_i * alpha <= alpha for every
  // candidate, with b_i <= 0 since F is nondecreasing.
  const Rational width = right - left;
  const Rational ta = left + width / 3;
  const Rational tb = left + 2 * width / 3;
  const auto va = gap_candidates(f, gamma * ta, g);
  const auto vb = gap_candidates(f, gamma * tb, g);
  Rational bound = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Rational slope = (vb[i] - va[i]) / (tb - ta);
    if (slope > 0) throw std::logic_error("levy: increasing gap term");
    const Rational intercept = va[i] - slope * ta;
    bound = max(bound, Rational(intercept / (1 - slope)));
  }
  return min(right, max(left, bound));
}

LevyBisection levy_bisection(const Rational& gamma, const Cdf& f, const Cdf& g,
                             std::size_t iterations) {
  if (levy_feasible(gamma, f, g, 0)) return {0, 0};
  Rational lo = 0;
  Rational hi = 1;
  for (std::size_t i = 0; i < iterations; ++i) {
    Rational mid = (lo + hi) / 2;
    if (levy_feasible(gamma, f, g, mid)) {
      hi = std::move(mid);
    } else {
      lo = std::move(mid);
    }
  }
  return {lo, hi};
}

Rational alpha_for_net(const Cdf& f, const FNet& net, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("alpha_for_net: eps must be positive");
  std::optional<Rational> alpha;
  auto tighten = [&](const Rational& r) {
    if (!alpha || r < *alpha) alpha = r;
  };
  for (const auto& p : net.points()) {
    if (!f.continuous_at(p)) {
      throw std::invalid_argument("alpha_for_net: net point " + to_string(p) +
                                  " is a jump of the center");
    }
    const Rational at = f(p);
    if (const Rational up = at + eps; up < 1) tighten(upper_crossing(f, up) - p);
    if (const Rational down = at - eps; down > 0) tighten(p - lower_crossing(f, down));
    for (const auto& j : f.jumps()) tighten(abs(j.location - p) / 2);
  }
  if (!alpha || *alpha > 1) return 1;
  return *alpha;
}

FNet net_for_alpha(const Cdf& f, const Rational& alpha, const Rational& eps) {
  if (alpha <= 0) throw std::invalid_argument("net_for_alpha: alpha must be positive");
  if (eps <= 0) throw std::invalid_argument("net_for_alpha: eps must be positive");
  const Rational step = alpha / 2;
  const SupportBound support = f.support();

  std::vector<Rational> points;
  for (Rational x = support.low - step;; x += step) {
    Rational p = x;
    if (!f.continuous_at(p)) {
      Rational nudge = step / 2;
      while (!f.continuous_at(x + nudge)) nudge /= 2;
      p = x + nudge;
    }
    points.push_back(std::move(p));
    if (x >= support.high) break;
  }

  // Drop points that the constraints F(x_0) <= eps and F(x_n) >= 1 - eps do
  // not need.
  std::size_t first = 0;
  while (first + 1 < points.size() && f(points[first + 1]) <= eps) ++first;
  std::size_t last = points.size() - 1;
  while (last > first && f(points[last - 1]) >= 1 - eps) --last;
  return FNet::for_center(f, std::vector<Rational>(points.begin() + static_cast<long>(first),
                                                   points.begin() + static_cast<long>(last) + 1));
}

// ---------------------------------------------------------------------------

Gauge Gauge::phi(Cdf center, Rational alpha) {
  if (alpha <= 0) throw std::invalid_argument("phi gauge: alpha must be positive");
  return Gauge(PhiGauge{std::move(center), std::move(alpha)});
}

Gauge Gauge::psi(Cdf center, FNet net) {
  if (!net.valid_for(center)) {
    throw std::invalid_argument("psi gauge: net contains a jump of the center");
  }
  return Gauge(PsiGauge{std::move(center), std::move(net)});
}

Gauge Gauge::levy(Cdf center, Rational gamma) {
  if (gamma <= 0) throw std::invalid_argument("levy gauge: gamma must be positive");
  return Gauge(LevyGauge{std::move(center), std::move(gamma)});
}

const Cdf& Gauge::center() const {
  return std::visit([](const auto& k) -> const Cdf& { return k.center; }, kind_);
}

Rational Gauge::operator()(const Cdf& g) const {
  struct Visitor {
    const Cdf& g;
    Rational operator()(const PhiGauge& k) const { return qprok::phi(k.center, k.alpha, g); }
    Rational operator()(const PsiGauge& k) const { return qprok::psi(k.center, k.net, g); }
    Rational operator()(const LevyGauge& k) const { return qprok::levy(k.gamma, k.center, g); }
  };
  return std::visit(Visitor{g}, kind_);
}

void GaugeSelection::assign(Gauge gauge) {
  for (auto& existing : gauges_) {
    if (existing.center() == gauge.center()) {
      existing = std::move(gauge);
      return;
    }
  }
  gauges_.push_back(std::move(gauge));
}

const Gauge& GaugeSelection::at(const Cdf& center) const {
  for (const auto& g : gauges_) {
    if (g.center() == center) return g;
  }
  throw std::out_of_range("no gauge selected for center " + describe(center));
}

bool GaugeSelection::contains(const Cdf& center) const {
  return std::any_of(gauges_.begin(), gauges_.end(),
                     [&](const Gauge& g) { return g.center() == center; });
}

// ---------------------------------------------------------------------------

const char* basis_name(Basis basis) {
  switch (basis) {
    case Basis::Phi:
      return "phi";
    case Basis::Levy:
      return "levy";
    case Basis::Psi:
      return "psi";
  }
  return "?";
}

DeltaBracket delta_distance(const Cdf& f, std::span<const Cdf> family, Basis basis,
                            std::size_t depth) {
  if (family.empty()) throw std::invalid_argument("delta_distance: empty family");
  if (depth == 0) throw std::invalid_argument("delta_distance: depth must be at least 1");

  DeltaBracket out;
  out.upper = uniform_distance(f, family.front());
  for (const auto& g : family.subspan(1)) out.upper = min(out.upper, uniform_distance(f, g));

  // Psi nets grow by union; keep the running per-member maximum.
  std::vector<Rational> psi_running(family.size(), Rational(0));

  out.trajectory.reserve(depth);
  for (std::size_t n = 1; n <= depth; ++n) {
    const Rational param = rational(1, static_cast<long>(n));
    std::optional<Rational> smallest;
    for (std::size_t i = 0; i < family.size(); ++i) {
      Rational v;
      switch (basis) {
        case Basis::Phi:
          v = phi(f, param, family[i]);
          break;
        case Basis::Levy:
          v = levy(param, f, family[i]);
          break;
        case Basis::Psi:
          psi_running[i] = max(psi_running[i], psi(f, net_for_alpha(f, param, param), family[i]));
          v = psi_running[i];
          break;
      }
      if (!smallest || v < *smallest) smallest = std::move(v);
    }
    if (!out.trajectory.empty() && *smallest < out.trajectory.back()) {
      throw std::logic_error(std::string("delta_distance: ") + basis_name(basis) +
                             " trajectory decreased at n=" + std::to_string(n));
    }
    out.trajectory.push_back(*smallest);
  }
  out.lower = out.trajectory.back();
  if (out.lower > out.upper) {
    throw std::logic_error("delta_distance: gauge exceeds the uniform distance");
  }
  return out;
}

}  // namespace qprok
