#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/rational.hpp"

namespace densitylab {

// Base of an exponential weight: Euler's e or an exact rational > 1.
struct WeightBase {
  bool euler = true;
  Rational value{1};

  static WeightBase e() { return WeightBase{}; }
  static WeightBase rational(Rational r) {
    if (!(r > Rational(1)))
      throw Error(Error::Code::invalid_spec, "exponential base must be > 1");
    return WeightBase{false, r};
  }
  std::string str() const { return euler ? "e" : value.str(); }
};

struct GrowthDiagnostics {
  ExtRational liminf_ratio;  // of m_n / n over the tested tail (or analytic)
  ExtRational limsup_ratio;
  enum class LimitExists { yes, no, undetermined } limit_exists =
      LimitExists::undetermined;
  ExtRational limit;  // meaningful when limit_exists == yes
  bool analytic = false;
  enum class Trend { increasing, decreasing, flat, mixed } tail_trend = Trend::mixed;
};

// The increasing weight sequence (m_n) in [1, inf). Counting against a real
// bound m_n is defined as counting up to floor(m_n); floors are exact
// integers (GMP for rational powers, MPFR interval evaluation for e-based
// forms). Immutable and freely shareable.
class WeightSequence {
 public:
  enum class Kind { power, linear, table, expo, product };

  // m_n = n^q, q >= 1 (rational, exactly representable).
  static WeightSequence power(Rational q);
  // m_n = slope * n + offset; requires slope >= 0 and m_1 >= 1.
  static WeightSequence linear(Rational slope, Rational offset);
  static WeightSequence table(std::vector<Rational> values);
  // m_n = b^n.
  static WeightSequence expo(WeightBase b);
  // m_n = n * b^n.
  static WeightSequence product(WeightBase b);
  static WeightSequence identity() { return power(Rational(1)); }

  Kind kind() const { return kind_; }
  const Rational& q() const { return q_; }
  const Rational& slope() const { return slope_; }
  const Rational& offset() const { return offset_; }
  const WeightBase& base() const { return base_; }
  const std::vector<Rational>& table_values() const { return table_; }

  // Largest index with a defined value (table length, or the coordinate cap).
  std::int64_t index_limit() const;

  std::int64_t floor_at(std::int64_t n) const;  // exact; throws on overflow past kCoordCap
  std::int64_t ceil_at(std::int64_t n) const;
  double approx_at(std::int64_t n) const;
  double log_at(std::int64_t n) const;  // ln m_n, defined far past the cap
  bool is_integer_valued() const;

  // Analytic lim / liminf / limsup of m_n/n where the closed form decides it.
  std::optional<ExtRational> ratio_limit() const;
  std::optional<ExtRational> ratio_liminf() const;
  std::optional<ExtRational> ratio_limsup() const;

  // Tail diagnostics of m_n/n over n in [N/2, N]; analytic when possible.
  GrowthDiagnostics growth(std::int64_t N) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::power;
  Rational q_{1};
  Rational slope_{1}, offset_{0};
  WeightBase base_;
  std::vector<Rational> table_;
};

// floor(x^(num/den)) for x >= 1, num, den >= 1, with an exactness flag
// (exact when x^num is a perfect den-th power).
struct RootFloor {
  std::int64_t value = 0;
  bool exact = false;
};
RootFloor floor_root_pow(std::int64_t x, std::int64_t num, std::int64_t den);

struct IndexDilationBound {
  bool diverges = false;                 // empirical ratio grows past any constant
  std::optional<double> certified_L;     // sup of m_ceil(kc)/m_k over k <= N
  std::optional<Rational> certified_L_exact;  // when every ratio was exact
  std::optional<double> analytic_L;      // closed-form certificate (power kind)
  std::int64_t tested_up_to = 0;
};

// Whether dilating the index by c keeps the scale within a constant factor:
// the smallest L certified over k <= N with m_ceil(kc) <= L * m_k, or
// divergence. Power scales carry the analytic certificate L = (c+1)^q.
IndexDilationBound index_dilation_bound(const WeightSequence& m, const Rational& c,
                                        std::int64_t N);

}  // namespace densitylab
