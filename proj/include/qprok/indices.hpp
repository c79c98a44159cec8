#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprok/approach.hpp"
#include "qprok/cdf.hpp"
#include "qprok/family.hpp"
#include "qprok/rational.hpp"

namespace qprok {

/// Raised by helly_select when a grid value does not settle within the
/// sequence's horizon.
class SelectionError : public std::runtime_error {
 public:
  SelectionError(const std::string& what, Rational grid_point)
      : std::runtime_error(what), grid_point_(std::move(grid_point)) {}
  const Rational& grid_point() const { return grid_point_; }

 private:
  Rational grid_point_;
};

struct HellyResult {
  /// Increasing member indices (1-based) of the selected subsequence, finite
  /// prefix.
  std::vector<std::size_t> selector;
  /// Pointwise limit on [-M, M), extended by 0 below and 1 at/above M.
  Cdf limit;
  /// Certified upper end of the limit operator of the subsequence at `limit`.
  Rational lambda_bound;
  SupportBound truncation;
  /// sup_n max{F_n(-M), 1 - F_n(M)}.
  Rational escape_bound;
};

struct IndexBracket {
  Rational lower;
  Rational upper;
  std::string lower_witness;
  std::optional<HellyResult> upper_witness;

  bool ordered() const { return lower <= upper; }
  /// lower <= upper <= lower + eps.
  bool within(const Rational& eps) const { return ordered() && upper <= lower + eps; }
};

/// inf over M > 0 of sup over the family of max{F(-M), 1 - F(M)}. Exact.
Rational escape_index(const FamilySpec& family);
bool is_tight(const FamilySpec& family);

/// 1, 1/2, ..., 1/depth.
std::vector<Rational> default_alpha_grid(std::size_t depth = 64);

/// sup over continuity points x of F of |F(x) - L(x)|.
Rational continuity_gap(const Cdf& f, const PointwiseLimit& limit);

/// Bracket for the limit operator of the sequence at F. The lower end is the
/// largest limsup_n phi(F, alpha, F_n) over the grid; the upper end is the
/// exact value through net gauges, i.e. the largest gap between F and the
/// pointwise limit at continuity points of F.
IndexBracket limit_operator(const SequenceSpec& seq, const Cdf& f,
                            const std::vector<Rational>& alpha_grid);

/// Subsequence and limit in the window [-M, M), realized by refining the index
/// set grid point by grid point (values within eps/2 of the pointwise limit)
/// and taking the diagonal. The window must satisfy
/// sup_n max{F_n(-M), 1 - F_n(M)} <= escape index + eps.
HellyResult helly_select(const SequenceSpec& seq, const SupportBound& window,
                         const Rational& grid_step, const Rational& eps);

/// Sequences probed by prokhorov_bracket: each explicit member as a constant
/// sequence, then every tail started at its first and middle member.
std::vector<SequenceSpec> bracket_runs(const FamilySpec& family);

/// [escape index, largest certified Helly limit operator over bracket_runs].
/// Helly windows are [-M, M) with M = family.settled_window(), grid step M/8.
IndexBracket prokhorov_bracket(const FamilySpec& family, const Rational& eps);

/// Relative sequential compactness decided at tolerance eps: the bracket's
/// upper end is at most eps.
bool weak_rsc_flag(const FamilySpec& family, const Rational& eps);

struct LindelofWitness {
  std::vector<Cdf> centers;
  Rational alpha;  // gauge parameter used for the cover
  Rational level;  // max over the test set of min over centers of phi
};

/// Discrete centers covering every test Cdf: each test member gets a center
/// with phi(center, eps, member) < eps. Segments are replaced by staircases
/// with steps no wider than eps.
LindelofWitness lindelof_witness(std::span<const Cdf> test_set, const Rational& eps);

// CDF space as an approach space: basis phi_{F, 1/(k+1)}, k < depth.
approach::LocalBasisSpace<Cdf> cdf_space(std::size_t depth = 64);
approach::TailSequence<Cdf> as_tail(const SequenceSpec& seq);

struct CdfTheorem22 {
  approach::Theorem22Report report;
  IndexBracket rsc;
  LindelofWitness lindelof;
};

/// Index chain on a template family. The relative compactness bracket runs
/// from the escape index to the sequential bracket's upper end plus the
/// Lindelof witness level. Throws approach::ContractViolation on violation.
CdfTheorem22 cdf_theorem22(const FamilySpec& family, const Rational& eps,
                           std::span<const Cdf> extra_test_set = {});

}  // namespace qprok
