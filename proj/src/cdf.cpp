#include "qprok/cdf.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qprok {

namespace {

std::vector<Jump> normalize_jumps(std::vector<Jump> jumps) {
  std::map<Rational, Rational> merged;
  for (auto& j : jumps) {
    if (j.mass < 0) {
      throw std::invalid_argument("negative jump mass " + to_string(j.mass) + " at " +
                                  to_string(j.location));
    }
    if (j.mass == 0) continue;
    merged[j.location] += j.mass;
  }
  std::vector<Jump> out;
  out.reserve(merged.size());
  for (auto& [loc, mass] : merged) out.push_back({loc, mass});
  return out;
}

std::vector<Segment> normalize_segments(std::vector<Segment> segments) {
  std::vector<Rational> cuts;
  std::vector<Segment> live;
  for (auto& s : segments) {
    if (s.mass < 0) {
      throw std::invalid_argument("negative segment mass " + to_string(s.mass));
    }
    if (!(s.left < s.right)) {
      throw std::invalid_argument("degenerate segment [" + to_string(s.left) + ", " +
                                  to_string(s.right) + "]");
    }
    if (s.mass == 0) continue;
    cuts.push_back(s.left);
    cuts.push_back(s.right);
    live.push_back(std::move(s));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Elementary pieces between consecutive cuts, each with summed density.
  std::vector<Segment> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational& lo = cuts[i];
    const Rational& hi = cuts[i + 1];
    Rational density = 0;
    for (const auto& s : live) {
      if (s.left <= lo && hi <= s.right) density += s.density();
    }
    if (density == 0) continue;
    Rational mass = density * (hi - lo);
    if (!pieces.empty() && pieces.back().right == lo && pieces.back().density() == density) {
      pieces.back().right = hi;
      pieces.back().mass += mass;
    } else {
      pieces.push_back({lo, hi, std::move(mass)});
    }
  }
  return pieces;
}

}  // namespace

Cdf Cdf::from_parts(std::vector<Jump> jumps, std::vector<Segment> segments) {
  Cdf f;
  f.jumps_ = normalize_jumps(std::move(jumps));
  f.segments_ = normalize_segments(std::move(segments));

  Rational total = 0;
  f.jump_cum_.reserve(f.jumps_.size());
  for (const auto& j : f.jumps_) {
    total += j.mass;
    f.jump_cum_.push_back(total);
  }
  Rational seg_total = 0;
  f.segment_cum_.reserve(f.segments_.size());
  for (const auto& s : f.segments_) {
    seg_total += s.mass;
    f.segment_cum_.push_back(seg_total);
  }
  total += seg_total;
  if (total != 1) {
    throw std::invalid_argument("total mass is " + to_string(total) + ", expected 1");
  }

  for (const auto& j : f.jumps_) f.knots_.push_back(j.location);
  for (const auto& s : f.segments_) {
    f.knots_.push_back(s.left);
    f.knots_.push_back(s.right);
  }
  std::sort(f.knots_.begin(), f.knots_.end());
  f.knots_.erase(std::unique(f.knots_.begin(), f.knots_.end()), f.knots_.end());
  return f;
}

Rational Cdf::continuous_part(const Rational& x) const {
  // Segments are disjoint and sorted, so right endpoints are sorted too.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](const Rational& v, const Segment& s) { return v < s.right; });
  const auto full = static_cast<std::size_t>(it - segments_.begin());
  Rational mass = full == 0 ? Rational(0) : segment_cum_[full - 1];
  if (it != segments_.end() && it->left < x) mass += (x - it->left) * it->density();
  return mass;
}

Rational Cdf::operator()(const Rational& x) const {
  auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x,
                             [](const Rational& v, const Jump& j) { return v < j.location; });
  const auto n = static_cast<std::size_t>(it - jumps_.begin());
  Rational value = n == 0 ? Rational(0) : jump_cum_[n - 1];
  value += continuous_part(x);
  return value;
}

Rational Cdf::left_limit(const Rational& x) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x,
                             [](const Jump& j, const Rational& v) { return j.location < v; });
  const auto n = static_cast<std::size_t>(it - jumps_.begin());
  Rational value = n == 0 ? Rational(0) : jump_cum_[n - 1];
  value += continuous_part(x);
  return value;
}

Rational Cdf::jump_at(const Rational& x) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x,
                             [](const Jump& j, const Rational& v) { return j.location < v; });
  if (it != jumps_.end() && it->location == x) return it->mass;
  return 0;
}

Rational eval(const Cdf& f, const Rational& x) { return f(x); }
Rational left_limit(const Cdf& f, const Rational& x) { return f.left_limit(x); }

Cdf dirac(const Rational& a) { return Cdf::from_parts({{a, 1}}, {}); }

Cdf uniform(const Rational& a, const Rational& b) {
  if (!(a < b)) {
    throw std::invalid_argument("uniform(a, b) needs a < b, got a=" + to_string(a) +
                                ", b=" + to_string(b));
  }
  return Cdf::from_parts({}, {{a, b, 1}});
}

Cdf mixture(std::span<const Rational> weights, std::span<const Cdf> parts) {
  if (weights.size() != parts.size()) {
    throw std::invalid_argument("mixture: " + std::to_string(weights.size()) + " weights for " +
                                std::to_string(parts.size()) + " parts");
  }
  if (weights.empty()) throw std::invalid_argument("mixture: no parts");
  Rational sum = 0;
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("mixture: negative weight " + to_string(w));
    sum += w;
  }
  if (sum != 1) {
    throw std::invalid_argument("mixture: weights sum to " + to_string(sum) + ", expected 1");
  }
  std::vector<Jump> jumps;
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (weights[i] == 0) continue;
    for (const auto& j : parts[i].jumps()) jumps.push_back({j.location, weights[i] * j.mass});
    for (const auto& s : parts[i].segments()) {
      segments.push_back({s.left, s.right, weights[i] * s.mass});
    }
  }
  return Cdf::from_parts(std::move(jumps), std::move(segments));
}

Cdf shift(const Cdf& f, const Rational& t) {
  std::vector<Jump> jumps;
  std::vector<Segment> segments;
  for (const auto& j : f.jumps()) jumps.push_back({j.location + t, j.mass});
  for (const auto& s : f.segments()) segments.push_back({s.left + t, s.right + t, s.mass});
  return Cdf::from_parts(std::move(jumps), std::move(segments));
}

Cdf convolve(const Cdf& f, const Cdf& g) {
  if (!f.is_discrete() && !g.is_discrete()) {
    throw std::domain_error(
        "convolve: both operands have a continuous part; segment-by-segment convolution "
        "leaves the piecewise-uniform class");
  }
  std::vector<Jump> jumps;
  std::vector<Segment> segments;
  for (const auto& a : f.jumps()) {
    for (const auto& b : g.jumps()) jumps.push_back({a.location + b.location, a.mass * b.mass});
    for (const auto& s : g.segments()) {
      segments.push_back({s.left + a.location, s.right + a.location, a.mass * s.mass});
    }
  }
  for (const auto& s : f.segments()) {
    for (const auto& b : g.jumps()) {
      segments.push_back({s.left + b.location, s.right + b.location, s.mass * b.mass});
    }
  }
  return Cdf::from_parts(std::move(jumps), std::move(segments));
}

std::string describe(const Cdf& f) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& j : f.jumps()) {
    os << (first ? "" : ", ") << "jump " << to_string(j.location) << ':' << to_string(j.mass);
    first = false;
  }
  for (const auto& s : f.segments()) {
    os << (first ? "" : ", ") << "segment [" << to_string(s.left) << ',' << to_string(s.right)
       << "]:" << to_string(s.mass);
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace qprok
