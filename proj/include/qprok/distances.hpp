#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "qprok/cdf.hpp"
#include "qprok/rational.hpp"

namespace qprok {

/// Finite, strictly increasing, nonempty set of points. Built with
/// `FNet::for_center` it is additionally guaranteed to consist of continuity
/// points of that center.
class FNet {
 public:
  /// Throws std::invalid_argument if points are empty or not strictly
  /// increasing.
  explicit FNet(std::vector<Rational> points);
  /// As above, and also rejects any point where `center` jumps.
  static FNet for_center(const Cdf& center, std::vector<Rational> points);

  const std::vector<Rational>& points() const { return points_; }
  bool valid_for(const Cdf& center) const;

 private:
  std::vector<Rational> points_;
};

/// sup_x |F(x) - G(x)|.
Rational uniform_distance(const Cdf& f, const Cdf& g);

/// The values whose maximum (together with 0) is
///   sup_x max{F(x - s) - G(x), G(x) - F(x + s)},   s >= 0.
/// One entry per (knot, kind) pair, in an order that depends only on the
/// number of knots of F and G. When s (or a translation of G) varies inside
/// an interval containing no breakpoint, every entry is affine in it.
std::vector<Rational> gap_candidates(const Cdf& f, const Rational& s, const Cdf& g);

/// max(0, max of gap_candidates). At s = 0 this is the uniform distance.
Rational shift_gap(const Cdf& f, const Rational& s, const Cdf& g);

/// Positive shifts at which some gap candidate changes slope: all |g - f|
/// over knots f of F and g of G, sorted, without duplicates.
std::vector<Rational> gap_breakpoints(const Cdf& f, const Cdf& g);

/// Limit as t -> t0+ of max(0, max_i c_i(t)) where each c_i is affine on
/// (t0, t1). Evaluates twice inside the interval and extrapolates.
Rational right_limit_of_max(const std::function<std::vector<Rational>(const Rational&)>& c,
                            const Rational& t0, const Rational& t1);

/// phi_{F,alpha}(G) = sup_x max{F(x - alpha) - G(x), G(x) - F(x + alpha)},
/// clamped at 0. Requires alpha > 0.
Rational phi(const Cdf& f, const Rational& alpha, const Cdf& g);

/// psi_{F,N}(G) = max_{x in N} |F(x) - G(x)|. Throws std::invalid_argument if
/// the net contains a jump of F.
Rational psi(const Cdf& f, const FNet& net, const Cdf& g);

/// Whether F(x - gamma*alpha) - alpha <= G(x) <= F(x + gamma*alpha) + alpha
/// holds for every real x.
bool levy_feasible(const Rational& gamma, const Cdf& f, const Cdf& g, const Rational& alpha);

/// Levy metric with parameter gamma: the infimum of feasible alpha. Exact.
Rational levy(const Rational& gamma, const Cdf& f, const Cdf& g);

struct LevyBisection {
  Rational infeasible;  // largest probed infeasible alpha (0 if none)
  Rational feasible;    // smallest probed feasible alpha
};

/// Independent route to the Levy metric: halves [0, 1] `iterations` times
/// using only `levy_feasible`. The metric lies in (infeasible, feasible].
LevyBisection levy_bisection(const Rational& gamma, const Cdf& f, const Cdf& g,
                             std::size_t iterations);

/// Returns alpha > 0 with psi(F, net, G) <= phi(F, alpha, G) + eps for all G.
///
/// For each net point p, alpha stays within the radius on which F moves by at
/// most eps around p, and within half the distance from p to the nearest jump
/// of F. The smallest such radius over the net is returned, capped at 1.
Rational alpha_for_net(const Cdf& f, const FNet& net, const Rational& eps);

/// Returns an F-net x_0 < ... < x_n with F(x_0) <= eps, gaps < alpha and
/// F(x_n) >= 1 - eps, so that phi(F, alpha, G) <= psi(F, net, G) + eps for all
/// G. Grid points are spaced alpha/2 apart starting alpha/2 below the
/// support; a point landing on a jump moves right by alpha/4, halved until it
/// clears every jump.
FNet net_for_alpha(const Cdf& f, const Rational& alpha, const Rational& eps);

// ---------------------------------------------------------------------------
// Gauges

struct PhiGauge {
  Cdf center;
  Rational alpha;
};

struct PsiGauge {
  Cdf center;
  FNet net;
};

struct LevyGauge {
  Cdf center;
  Rational gamma;
};

/// A local distance at a center F, evaluated on other Cdfs. Vanishes at F.
class Gauge {
 public:
  static Gauge phi(Cdf center, Rational alpha);
  static Gauge psi(Cdf center, FNet net);
  static Gauge levy(Cdf center, Rational gamma);

  const Cdf& center() const;
  Rational operator()(const Cdf& g) const;

  const std::variant<PhiGauge, PsiGauge, LevyGauge>& kind() const { return kind_; }

 private:
  explicit Gauge(std::variant<PhiGauge, PsiGauge, LevyGauge> kind) : kind_(std::move(kind)) {}
  std::variant<PhiGauge, PsiGauge, LevyGauge> kind_;
};

/// One gauge per center, over the finitely many centers in play.
class GaugeSelection {
 public:
  /// Adds or replaces the gauge for `gauge.center()`.
  void assign(Gauge gauge);
  /// Throws std::out_of_range for an unknown center.
  const Gauge& at(const Cdf& center) const;
  bool contains(const Cdf& center) const;
  std::size_t size() const { return gauges_.size(); }
  const std::vector<Gauge>& gauges() const { return gauges_; }

 private:
  std::vector<Gauge> gauges_;
};

// ---------------------------------------------------------------------------
// Distance from a point to a finite set

enum class Basis { Phi, Levy, Psi };

const char* basis_name(Basis basis);

struct DeltaBracket {
  /// sup over the canonical parameters 1/n, n <= depth, of the smallest gauge
  /// value over the family. Exact.
  Rational lower;
  /// min over the family of the uniform distance, which dominates every gauge
  /// of each basis.
  Rational upper;
  /// lower after each depth step, nondecreasing.
  std::vector<Rational> trajectory;

  bool converged() const { return lower == upper; }
};

/// sup over the basis gauges at F of the infimum over the family. The sup is
/// taken along alpha = 1/n (Phi), gamma = 1/n (Levy), or the cumulative union
/// of net_for_alpha(F, 1/n, 1/n) (Psi). Throws std::invalid_argument for an
/// empty family or zero depth, std::logic_error if the trajectory is not
/// monotone.
DeltaBracket delta_distance(const Cdf& f, std::span<const Cdf> family, Basis basis,
                            std::size_t depth = 64);

}  // namespace qprok
