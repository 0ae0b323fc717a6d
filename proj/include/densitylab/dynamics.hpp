#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/families.hpp"
#include "densitylab/intset.hpp"
#include "densitylab/weights.hpp"

namespace densitylab {

using Vec = std::vector<double>;

// Truncated sequence-space model with a translation-invariant metric. The
// Frechet model uses the seminorms p_n(x) = max_{j<=n} |x_j| and
// d(x, y) = sum_n 2^(-n) p_n(x-y) / (1 + p_n(x-y)); beyond the truncation
// dimension the seminorms are constant, so the tail of the series collapses
// to the closed form 2^(-D) p_D/(1+p_D) with no truncation error.
struct SpaceModel {
  enum class Kind { frechet_seq, banach_l1 } kind = Kind::frechet_seq;
  int dim = 32;
  std::vector<double> l1_weights;  // banach_l1 only; defaults to all ones

  static SpaceModel frechet(int dim);
  static SpaceModel banach(int dim, std::vector<double> weights = {});
  double metric(const Vec& x, const Vec& y) const;
};

struct Ball {
  Vec center;
  double radius = 0.25;
};

// Either a weighted backward shift (T x)_j = w_{j+1} x_{j+1} on the truncated
// space, or a planted test oracle: the n-th operator sends every x to
// `target` when n lies in `planted` and to `far` otherwise.
struct OperatorSpec {
  enum class Kind { backward_shift, planted_oracle } kind = Kind::backward_shift;
  std::vector<double> shift_weights;  // w_1 .. w_D, all > 0
  IntegerSet planted;
  Vec target, far;

  static OperatorSpec shift(std::vector<double> weights);
  static OperatorSpec constant_shift(double w, int dim);
  static OperatorSpec oracle(IntegerSet planted, Vec target, Vec far);
};

struct OrbitResult {
  std::vector<Vec> states;  // T^1 x .. T^N x
  bool overflow = false;
  std::int64_t truncated_at = 0;  // first n past 1e300, when overflow
};
OrbitResult orbit(const OperatorSpec& op, const SpaceModel& space, const Vec& x,
                  std::int64_t n);

// (T^n x)_j as the weight product applied right-to-left, matching the
// floating-point association of n single steps exactly.
Vec shift_power(const std::vector<double>& weights, const Vec& x, std::int64_t n);

struct HittingSet {
  IntegerSet times;  // S(x, V) within [1, n_max]
  std::int64_t n_max = 0;
  std::int64_t boundary_ambiguous = 0;  // |d - r| < 1e-12, excluded from S
  bool orbit_overflow = false;
};
HittingSet hitting_set(const OperatorSpec& op, const SpaceModel& space, const Vec& x,
                       const Ball& v, std::int64_t n);

// Per-family verdicts over a ball grid: yes only when every ball gives yes,
// no when some ball gives no, undetermined otherwise.
struct FamilyVerdictRow {
  std::string family;
  Verdict verdict = Verdict::undetermined;
  std::size_t weakest_ball = 0;  // index of the deciding ball
};

struct MnWitnessResult;

struct ScaleWitnessRow {
  bool found = false;
  double L = 0;
  double sup_ratio = 0;
  std::vector<std::int64_t> subsequence_head;  // first hitting times
};

struct ClassificationReport {
  std::vector<FamilyVerdictRow> rows;
  std::vector<HittingSet> hits;            // per ball
  std::vector<ScaleWitnessRow> witnesses;  // per ball: n_k <= L * m_k bound
  std::optional<double> witness_sup_L;     // sup over balls where one exists
  std::int64_t n_max = 0;
  const FamilyVerdictRow* row(const std::string& family) const;
};
ClassificationReport classify(const OperatorSpec& op, const SpaceModel& space, const Vec& x,
                              const std::vector<Ball>& grid, const Rational& q,
                              const WeightSequence& m, const EvalOptions& opts = {});

// Finitely supported centers with coordinates in {0, +-1, +-1/2} up to the
// given support, at each radius.
std::vector<Ball> default_ball_grid(int support, const std::vector<double>& radii,
                                    std::size_t max_balls = 64);

// Clamps evaluation horizons so that every counting window a density
// evaluation opens stays within [1, horizon] (used for hitting sets, whose
// exact reach is the orbit length).
EvalOptions fit_evaluation_window(const EvalOptions& opts, const WeightSequence& m,
                                  std::int64_t horizon);

// Smallest grid L with n_k <= L * m_k for every k-th element n_k of S within
// the scanned range; none when the ratio passes the whole grid. Rule-backed
// sets continue past exactly representable elements in log space.
struct MnWitnessResult {
  bool found = false;
  double L = 0;
  double sup_ratio = 0;
  std::optional<Rational> sup_ratio_exact;
  std::int64_t scanned_k = 0;
  bool diverged = false;
  std::optional<bool> lower_q_consistent;  // witness <=> positive lower q-density
};
MnWitnessResult mn_witness(const IntegerSet& s, const WeightSequence& m,
                           const std::vector<double>& l_grid, std::int64_t k_max);

}  // namespace densitylab
