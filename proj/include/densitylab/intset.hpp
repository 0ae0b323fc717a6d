#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/rational.hpp"

namespace densitylab {

// Closed integer interval [lo, hi], 1 <= lo <= hi.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t length() const { return hi - lo + 1; }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// Sorts, merges overlapping/adjacent intervals, clamps to [1, horizon].
std::vector<Interval> canonicalize(std::vector<Interval> ivs, std::int64_t horizon);

// Eventually periodic structure: `prefix` covers [1, start-1]; from `start` on,
// membership of x depends only on (x - start) mod period, given by `pattern`
// (offsets in [0, period)).
struct PeriodicForm {
  std::vector<Interval> prefix;
  std::int64_t start = 1;
  std::int64_t period = 1;
  std::vector<Interval> pattern;  // offsets relative to the period, canonical
  std::int64_t per_period = 0;    // elements per period

  std::int64_t count_leq(std::int64_t x) const;
  void append_intervals(std::int64_t lo, std::int64_t hi, std::vector<Interval>& out) const;
};

// Growth metadata a generator rule can expose so that density evaluation can
// take analytic shortcuts. Polynomial means n_k ~ coeff * k^exponent.
struct EnumGrowth {
  enum class Kind { polynomial, exponential } kind = Kind::polynomial;
  Rational exponent{1};   // polynomial only
  double coeff = 1.0;     // polynomial only (leading coefficient)
  bool coeff_is_one = false;
  bool gaps_bounded = false;
};

// Generator backend of an IntegerSet. All methods are pure; implementations
// must be deterministic. Exact counting is available up to count_limit(),
// which may vastly exceed any materialized horizon.
class SetRule {
 public:
  virtual ~SetRule() = default;

  virtual std::string name() const = 0;
  virtual std::string params() const = 0;  // canonical parameter string, "" if none

  virtual std::int64_t count_limit() const = 0;
  virtual std::int64_t count_leq(std::int64_t x) const = 0;

  // Appends A ∩ [lo, hi] as canonical intervals.
  virtual void append_intervals(std::int64_t lo, std::int64_t hi,
                                std::vector<Interval>& out) const = 0;

  // k-th smallest element (1-based) when it is exactly representable.
  virtual std::optional<std::int64_t> element(std::int64_t k) const;

  // ln of the k-th element of the defining real-valued formula, defined for
  // enumeration rules even where the element itself overflows. NaN otherwise.
  virtual double log_element(std::int64_t /*k*/) const;

  virtual const PeriodicForm* periodic() const { return nullptr; }
  virtual const EnumGrowth* enumeration() const { return nullptr; }
};

std::shared_ptr<const SetRule> make_periodic_rule(PeriodicForm form);

struct GapProfile {
  std::vector<std::int64_t> elements;  // d_1 < d_2 < ... (N+1 of them)
  std::vector<std::int64_t> gaps;      // e_n = d_{n+1} - d_n (N of them)
  std::int64_t max_gap = 0;
  bool gap_exceeds(std::int64_t m) const { return max_gap > m; }
};

// Subset of N = {1, 2, ...} as a canonical disjoint interval union over
// [1, horizon], optionally backed by a generator rule that supports exact
// counting (and re-materialization) beyond the horizon. Immutable.
class IntegerSet {
 public:
  IntegerSet() = default;

  static IntegerSet from_intervals(std::vector<Interval> ivs,
                                   std::int64_t horizon = kDefaultHorizon);
  static IntegerSet from_elements(const std::vector<std::int64_t>& elems,
                                  std::int64_t horizon = kDefaultHorizon);
  static IntegerSet from_rule(std::shared_ptr<const SetRule> rule, std::int64_t horizon);
  static IntegerSet empty_set(std::int64_t horizon = kDefaultHorizon);
  static IntegerSet naturals(std::int64_t horizon = kDefaultHorizon);

  std::int64_t horizon() const { return horizon_; }
  // Largest b for which count(a, b) is exact: horizon, or further via rule.
  std::int64_t count_limit() const;
  const std::vector<Interval>& intervals() const { return intervals_; }
  const SetRule* rule() const { return rule_.get(); }
  std::shared_ptr<const SetRule> rule_ptr() const { return rule_; }

  bool is_empty_within_horizon() const { return intervals_.empty(); }
  std::int64_t size_within_horizon() const;

  // |A ∩ [a, b]|. Requires 1 <= a, a <= b, b <= count_limit().
  std::int64_t count(std::int64_t a, std::int64_t b) const;
  std::int64_t count_leq(std::int64_t x) const;
  bool contains(std::int64_t x) const;

  // k-th smallest element (1-based), if within count_limit().
  std::optional<std::int64_t> element(std::int64_t k) const;
  std::vector<std::int64_t> first_elements(std::int64_t n) const;

  // Same set re-materialized to a new horizon (rule-backed sets only when
  // growing). Growth proceeds in doubling steps so repeated extensions
  // amortize.
  IntegerSet with_horizon(std::int64_t h) const;

  const PeriodicForm* periodic() const { return rule_ ? rule_->periodic() : nullptr; }

 private:
  std::vector<Interval> intervals_;      // canonical, within [1, horizon_]
  std::vector<std::int64_t> cum_;        // cum_[i] = total count of intervals_[0..i)
  std::int64_t horizon_ = kDefaultHorizon;
  std::shared_ptr<const SetRule> rule_;

  void build_cum();
  std::int64_t count_leq_materialized(std::int64_t x) const;
};

enum class SetOp { unite, intersect, subtract, sym_diff, complement };

// Boolean combination; result horizon = min of the input horizons
// (complement uses A's horizon and ignores B). Periodic backing is composed
// when both inputs are periodic with a modest lcm, so complements of
// arithmetic progressions keep O(1) counting at any depth.
IntegerSet boolean_op(const IntegerSet& a, const IntegerSet& b, SetOp op);
IntegerSet complement(const IntegerSet& a);

// A + k (k > 0) or A - k = {a - k : a in A, a > k} (k < 0). Requires |k| < horizon.
IntegerSet translate(const IntegerSet& a, std::int64_t k);

// {k * a : a in A}; horizon scales by k, capped at kCoordCap.
IntegerSet dilate(const IntegerSet& a, std::int64_t k);

// First n gaps of A. Throws Error::insufficient_members if A has fewer than
// n + 1 members within its count limit.
GapProfile gap_profile(const IntegerSet& a, std::int64_t n);

// Extremes of the sliding-window count |A ∩ [n+1, n+w]| over n in
// [n_lo, n_hi]. Exact. Dispatches to a periodic closed form when available,
// otherwise walks interval breakpoints (streaming in chunks for rule-backed
// sets), so cost is O(pattern) or O(intervals in range), never O(n_hi - n_lo).
struct WindowExtremes {
  std::int64_t min_count = 0;
  std::int64_t max_count = 0;
  std::int64_t argmin_n = 0;
  std::int64_t argmax_n = 0;
};

WindowExtremes window_extremes(const IntegerSet& a, std::int64_t w,
                               std::int64_t n_lo, std::int64_t n_hi);

// Shares one interval stream across many window lengths.
std::vector<WindowExtremes> window_extremes_multi(const IntegerSet& a,
                                                  const std::vector<std::int64_t>& ws,
                                                  std::int64_t n_lo, std::int64_t n_hi);

}  // namespace densitylab
