#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/intset.hpp"
#include "densitylab/rational.hpp"
#include "densitylab/weights.hpp"

namespace densitylab {

enum class Tendency { liminf, limsup };
enum class InnerMode { tail, full };

// One of the sixteen density functionals: six simple kinds (lower/upper x
// classic/q/mn), two classic Banach kinds, and eight parameterized Banach
// kinds (inner liminf/limsup over the window position n, outer liminf/limsup
// over the window scale s, with q- or general-weight windows).
struct DensityKind {
  enum class Flavor { classic, q_kind, mn_kind };

  bool banach = false;
  Tendency inner = Tendency::liminf;  // simple kinds: the single tendency
  Tendency outer = Tendency::liminf;  // banach kinds only
  Flavor flavor = Flavor::classic;
  Rational q{1};
  WeightSequence weight = WeightSequence::identity();

  static DensityKind lower();
  static DensityKind upper();
  static DensityKind lower_q(Rational q);
  static DensityKind upper_q(Rational q);
  static DensityKind lower_mn(WeightSequence m);
  static DensityKind upper_mn(WeightSequence m);
  static DensityKind lower_banach();  // classic lower Banach density
  static DensityKind upper_banach();  // classic (upper) Banach density
  static DensityKind banach_q(Tendency inner, Tendency outer, Rational q);
  static DensityKind banach_mn(Tendency inner, Tendency outer, WeightSequence m);

  // Effective window-scale weight (identity for classic, n^q for q kinds).
  const WeightSequence& scale() const { return weight; }
  std::string label() const;
};

struct ProfilePoint {
  std::int64_t outer = 0;      // n for simple kinds, s for Banach kinds
  std::int64_t inner = -1;     // witness window position (Banach kinds)
  std::int64_t numerator = 0;  // exact count
  std::int64_t denominator = 1;
  Rational ratio() const { return Rational(numerator, denominator); }
};

struct EvalOptions {
  std::int64_t n_max = 1'000'000;
  std::int64_t s_max = 1'000;
  std::int64_t outer_step = 1;  // stride over the outer tail grid
  InnerMode inner_mode = InnerMode::tail;
  bool use_closed_form = true;
  bool ceil_windows = false;  // scale windows by ceil(m_s) instead of floor
  double blow_up_threshold = 1000.0;
  int blow_up_doublings = 2;
  bool detect_blow_up = true;
  bool keep_full_profile = false;
};

struct DensityResult {
  ExtRational value;
  bool exact = false;
  ExtRational lower_bound;
  ExtRational upper_bound;
  std::int64_t n_max = 0;
  std::int64_t s_max = 0;
  bool blow_up = false;
  std::string method;
  std::vector<ProfilePoint> profile;  // sampled unless keep_full_profile
};

// Exact ratios |A ∩ [1, floor(m_n)]| / n for n = 1..N.
std::vector<ProfilePoint> simple_profile(const IntegerSet& a, const WeightSequence& m,
                                         std::int64_t n, bool ceil_mode = false);

// Exact inf/sup over n in [n_lo, n_hi] of |A ∩ [n+1, n+floor(m_s)]| / s.
struct BanachWindowStats {
  std::int64_t s = 0;
  std::int64_t window = 0;
  std::int64_t min_count = 0;  // raw extremes; inf = min_count / s etc.
  std::int64_t max_count = 0;
  Rational inf;
  Rational sup;
  std::int64_t argmin_n = 0;
  std::int64_t argmax_n = 0;
};
BanachWindowStats banach_profile(const IntegerSet& a, const WeightSequence& m,
                                 std::int64_t s, std::int64_t n_lo, std::int64_t n_hi,
                                 bool ceil_mode = false);

// Evaluates a density functional. Closed forms (empty sets, vanishing weight
// ratios, periodic sets, polynomial enumerations) give exact values; otherwise
// finite-horizon estimation reports honest brackets, with the outer/inner
// double limit taken in the order the definitions state it (inner over n,
// outer over s). Divergence is reported as value +inf with a [B, +inf)
// bracket only after monotone growth past the configured threshold across
// blow_up_doublings horizon doublings.
DensityResult evaluate(const IntegerSet& a, const DensityKind& kind,
                       const EvalOptions& opts = {});

// Lower q-density of an explicitly enumerated set via the k / n_k^(1/q)
// profile, with exact rational root brackets.
struct LowerQReport {
  DensityResult result;
  bool positive = false;       // tail bracket separated from zero
  double min_L = 0.0;          // max n_k / k^q over the tested range
  bool ratio_diverging = false;
};
LowerQReport closed_form_lower_q(const std::vector<std::int64_t>& enumeration,
                                 const Rational& q, std::int64_t k_max);

// Verifies the classic density chain and the q-dominances on brackets, plus
// the pointwise count dominance that makes the q-dominances exact.
struct ChainCheckReport {
  bool ok = true;
  std::vector<std::string> violations;
  DensityResult banach_lower, lower, upper, banach_upper;
  DensityResult lower_q, upper_q;
  Rational q{2};
};
ChainCheckReport density_chain_check(const IntegerSet& a, const Rational& q,
                                     const EvalOptions& opts = {});

// Growth-based classification of the lower Banach pair (and, where the
// mathematics actually pins it down, the simple lower density), cross-checked
// against independent estimation.
enum class TrichotomyCase {
  ratio_liminf_zero,
  ratio_limit_zero,
  ratio_limit_infinite_bounded_gaps,
  ratio_limit_infinite_unbounded_gaps,
  inapplicable,
};

struct TrichotomyReport {
  TrichotomyCase kase = TrichotomyCase::inapplicable;
  ExtRational predicted;
  bool prediction_includes_simple = false;  // whether d_mn joins the prediction
  bool growth_analytic = false;
  bool gaps_analytic = false;
  bool gaps_bounded = false;
  std::int64_t max_gap_observed = 0;
  DensityResult banach_lower_l, banach_lower_u, simple_lower;
  bool consistent = false;
  std::string note;
};
TrichotomyReport trichotomy_classify(const IntegerSet& a, const WeightSequence& m,
                                     const EvalOptions& opts = {});

const char* to_string(TrichotomyCase c);

}  // namespace densitylab
