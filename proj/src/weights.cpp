#include "densitylab/weights.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <optional>

namespace densitylab {

namespace {

// x^p if it fits in unsigned __int128, else nullopt.
std::optional<unsigned __int128> pow_u128(std::int64_t x, std::int64_t p) {
  unsigned __int128 acc = 1;
  const unsigned __int128 lim = ~static_cast<unsigned __int128>(0);
  for (std::int64_t i = 0; i < p; ++i) {
    if (x != 0 && acc > lim / static_cast<unsigned __int128>(x)) return std::nullopt;
    acc *= static_cast<unsigned __int128>(x);
  }
  return acc;
}

RootFloor root_u128(unsigned __int128 v, std::int64_t b) {
  if (b == 1) {
    if (v > static_cast<unsigned __int128>(kCoordCap))
      throw_overflow("power exceeds the coordinate cap");
    return {static_cast<std::int64_t>(v), true};
  }
  // Seed from long double, then fix with exact comparisons.
  long double est = powl(static_cast<long double>(v), 1.0L / static_cast<long double>(b));
  std::int64_t r = static_cast<std::int64_t>(est);
  auto pw = [&](std::int64_t y) { return pow_u128(y, b); };
  while (r > 1) {
    auto p = pw(r);
    if (p && *p <= v) break;
    --r;
  }
  for (;;) {
    auto p = pw(r + 1);
    if (!p || *p > v) break;
    ++r;
  }
  auto p = pw(r);
  return {r, p && *p == v};
}

}  // namespace

RootFloor floor_root_pow(std::int64_t x, std::int64_t num, std::int64_t den) {
  if (x < 1 || num < 1 || den < 1)
    throw Error(Error::Code::invalid_spec, "floor_root_pow requires positive arguments");
  if (auto v = pow_u128(x, num)) {
    RootFloor rf = root_u128(*v, den);
    if (rf.value > kCoordCap) throw_overflow("x^(num/den) exceeds the coordinate cap");
    return rf;
  }
  // Arbitrary precision fallback.
  mpz_t t, r;
  mpz_init(t);
  mpz_init(r);
  mpz_ui_pow_ui(t, static_cast<unsigned long>(x), static_cast<unsigned long>(num));
  bool exact = true;
  if (den == 1) {
    mpz_set(r, t);
  } else {
    exact = mpz_root(r, t, static_cast<unsigned long>(den)) != 0;
  }
  if (!mpz_fits_slong_p(r)) {
    mpz_clear(t);
    mpz_clear(r);
    throw_overflow("x^(num/den) exceeds representable range");
  }
  const std::int64_t out = mpz_get_si(r);
  mpz_clear(t);
  mpz_clear(r);
  if (out > kCoordCap) throw_overflow("x^(num/den) exceeds the coordinate cap");
  return {out, exact};
}

namespace {

// floor((n^a)^(1/b)) exactly.
std::int64_t power_floor(std::int64_t n, std::int64_t a, std::int64_t b) {
  return floor_root_pow(n, a, b).value;
}

// floor(p^n / q^n) exactly (rational base p/q > 1).
std::int64_t rational_pow_floor(const Rational& base, std::int64_t n, bool times_n) {
  mpz_t num, den;
  mpz_init(num);
  mpz_init(den);
  mpz_ui_pow_ui(num, static_cast<unsigned long>(base.num), static_cast<unsigned long>(n));
  mpz_ui_pow_ui(den, static_cast<unsigned long>(base.den), static_cast<unsigned long>(n));
  if (times_n) mpz_mul_si(num, num, n);
  mpz_fdiv_q(num, num, den);
  if (!mpz_fits_slong_p(num)) {
    mpz_clear(num);
    mpz_clear(den);
    throw_overflow("b^n exceeds the coordinate cap at n=" + std::to_string(n));
  }
  const std::int64_t out = mpz_get_si(num);
  mpz_clear(num);
  mpz_clear(den);
  if (out > kCoordCap) throw_overflow("b^n exceeds the coordinate cap");
  return out;
}

// floor(e^n) or floor(n * e^n), certified by evaluating with directed
// rounding at increasing precision until both floors agree. e^n is never an
// integer, so this terminates quickly.
std::int64_t euler_floor(std::int64_t n, bool times_n) {
  for (mpfr_prec_t prec = 96; prec <= 4096; prec *= 2) {
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_si(lo, n, MPFR_RNDD);
    mpfr_set_si(hi, n, MPFR_RNDU);
    mpfr_exp(lo, lo, MPFR_RNDD);
    mpfr_exp(hi, hi, MPFR_RNDU);
    if (times_n) {
      mpfr_mul_si(lo, lo, n, MPFR_RNDD);
      mpfr_mul_si(hi, hi, n, MPFR_RNDU);
    }
    mpfr_floor(lo, lo);
    mpfr_floor(hi, hi);
    const bool fits = mpfr_fits_slong_p(hi, MPFR_RNDZ);
    std::int64_t flo = 0, fhi = 1;
    if (fits) {
      flo = mpfr_get_si(lo, MPFR_RNDZ);
      fhi = mpfr_get_si(hi, MPFR_RNDZ);
    }
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (!fits) throw_overflow("e^n exceeds the coordinate cap at n=" + std::to_string(n));
    if (flo == fhi) {
      if (flo > kCoordCap) throw_overflow("e^n exceeds the coordinate cap");
      return flo;
    }
  }
  throw_overflow("could not certify floor(e^n) at n=" + std::to_string(n));
}

}  // namespace

WeightSequence WeightSequence::power(Rational q) {
  if (q < Rational(1))
    throw Error(Error::Code::invalid_spec, "power weight requires q >= 1");
  WeightSequence w;
  w.kind_ = Kind::power;
  w.q_ = q;
  return w;
}

WeightSequence WeightSequence::linear(Rational slope, Rational offset) {
  if (slope < Rational(0))
    throw Error(Error::Code::invalid_spec, "linear weight requires slope >= 0");
  if (slope + offset < Rational(1))
    throw Error(Error::Code::invalid_spec, "linear weight requires m_1 >= 1");
  WeightSequence w;
  w.kind_ = Kind::linear;
  w.slope_ = slope;
  w.offset_ = offset;
  return w;
}

WeightSequence WeightSequence::table(std::vector<Rational> values) {
  if (values.empty())
    throw Error(Error::Code::invalid_spec, "weight table must be non-empty");
  Rational prev(0);
  for (const Rational& v : values) {
    if (v < Rational(1))
      throw Error(Error::Code::invalid_spec, "weight table entries must be >= 1");
    if (v < prev)
      throw Error(Error::Code::invalid_spec, "weight table must be nondecreasing");
    prev = v;
  }
  WeightSequence w;
  w.kind_ = Kind::table;
  w.table_ = std::move(values);
  return w;
}

WeightSequence WeightSequence::expo(WeightBase b) {
  WeightSequence w;
  w.kind_ = Kind::expo;
  w.base_ = b;
  return w;
}

WeightSequence WeightSequence::product(WeightBase b) {
  WeightSequence w;
  w.kind_ = Kind::product;
  w.base_ = b;
  return w;
}

std::int64_t WeightSequence::index_limit() const {
  if (kind_ == Kind::table) return static_cast<std::int64_t>(table_.size());
  return kCoordCap;
}

std::int64_t WeightSequence::floor_at(std::int64_t n) const {
  if (n < 1) throw Error(Error::Code::invalid_spec, "weight index must be >= 1");
  switch (kind_) {
    case Kind::power:
      return power_floor(n, q_.num, q_.den);
    case Kind::linear: {
      const Rational v = slope_ * Rational(n) + offset_;
      return v.floor();
    }
    case Kind::table:
      if (n > static_cast<std::int64_t>(table_.size()))
        throw Error(Error::Code::horizon_exceeded,
                    "weight table has only " + std::to_string(table_.size()) + " entries");
      return table_[static_cast<std::size_t>(n - 1)].floor();
    case Kind::expo:
      return base_.euler ? euler_floor(n, false) : rational_pow_floor(base_.value, n, false);
    case Kind::product:
      return base_.euler ? euler_floor(n, true) : rational_pow_floor(base_.value, n, true);
  }
  return 1;
}

std::int64_t WeightSequence::ceil_at(std::int64_t n) const {
  // ceil = floor + 1 unless the value is an exact integer.
  switch (kind_) {
    case Kind::power: {
      const RootFloor rf = floor_root_pow(n, q_.num, q_.den);
      return rf.exact ? rf.value : rf.value + 1;
    }
    case Kind::linear: {
      const Rational v = slope_ * Rational(n) + offset_;
      return v.ceil();
    }
    case Kind::table:
      if (n > static_cast<std::int64_t>(table_.size()))
        throw Error(Error::Code::horizon_exceeded,
                    "weight table has only " + std::to_string(table_.size()) + " entries");
      return table_[static_cast<std::size_t>(n - 1)].ceil();
    case Kind::expo:
      if (!base_.euler && base_.value.den == 1) return floor_at(n);
      return floor_at(n) + 1;  // e^n (and non-integer rational powers) never integral
    case Kind::product:
      if (!base_.euler && base_.value.den == 1) return floor_at(n);
      return floor_at(n) + 1;
  }
  return 1;
}

double WeightSequence::approx_at(std::int64_t n) const {
  return std::exp(log_at(n));
}

double WeightSequence::log_at(std::int64_t n) const {
  const double dn = static_cast<double>(n);
  switch (kind_) {
    case Kind::power:
      return q_.to_double() * std::log(dn);
    case Kind::linear:
      return std::log(slope_.to_double() * dn + offset_.to_double());
    case Kind::table:
      if (n > static_cast<std::int64_t>(table_.size()))
        throw Error(Error::Code::horizon_exceeded, "weight table exhausted");
      return std::log(table_[static_cast<std::size_t>(n - 1)].to_double());
    case Kind::expo:
      return dn * (base_.euler ? 1.0 : std::log(base_.value.to_double()));
    case Kind::product:
      return std::log(dn) + dn * (base_.euler ? 1.0 : std::log(base_.value.to_double()));
  }
  return 0.0;
}

bool WeightSequence::is_integer_valued() const {
  switch (kind_) {
    case Kind::power: return q_.den == 1;
    case Kind::linear: return slope_.den == 1 && offset_.den == 1;
    case Kind::table:
      return std::all_of(table_.begin(), table_.end(),
                         [](const Rational& v) { return v.den == 1; });
    case Kind::expo:
    case Kind::product:
      return !base_.euler && base_.value.den == 1;
  }
  return false;
}

std::optional<ExtRational> WeightSequence::ratio_limit() const {
  switch (kind_) {
    case Kind::power:
      if (q_ == Rational(1)) return ExtRational(Rational(1));
      return ExtRational::inf();
    case Kind::linear:
      return ExtRational(slope_);
    case Kind::expo:
    case Kind::product:
      return ExtRational::inf();
    case Kind::table:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<ExtRational> WeightSequence::ratio_liminf() const { return ratio_limit(); }
std::optional<ExtRational> WeightSequence::ratio_limsup() const { return ratio_limit(); }

GrowthDiagnostics WeightSequence::growth(std::int64_t N) const {
  if (N < 10) throw Error(Error::Code::invalid_spec, "growth diagnostics need N >= 10");
  GrowthDiagnostics g;
  if (auto lim = ratio_limit()) {
    g.analytic = true;
    g.limit_exists = GrowthDiagnostics::LimitExists::yes;
    g.limit = *lim;
    g.liminf_ratio = *lim;
    g.limsup_ratio = *lim;
    g.tail_trend = GrowthDiagnostics::Trend::flat;
    return g;
  }
  // Numeric tail scan (table kinds).
  const std::int64_t hi = std::min(N, index_limit());
  const std::int64_t lo = std::max<std::int64_t>(1, hi / 2);
  Rational mn = table_[static_cast<std::size_t>(lo - 1)] / Rational(lo);
  Rational mx = mn;
  bool any_up = false, any_down = false;
  Rational prev = mn;
  for (std::int64_t n = lo + 1; n <= hi; ++n) {
    const Rational r = table_[static_cast<std::size_t>(n - 1)] / Rational(n);
    mn = std::min(mn, r);
    mx = std::max(mx, r);
    if (r > prev) any_up = true;
    if (r < prev) any_down = true;
    prev = r;
  }
  g.liminf_ratio = ExtRational(mn);
  g.limsup_ratio = ExtRational(mx);
  g.limit_exists = GrowthDiagnostics::LimitExists::undetermined;
  if (any_up && any_down) g.tail_trend = GrowthDiagnostics::Trend::mixed;
  else if (any_up) g.tail_trend = GrowthDiagnostics::Trend::increasing;
  else if (any_down) g.tail_trend = GrowthDiagnostics::Trend::decreasing;
  else g.tail_trend = GrowthDiagnostics::Trend::flat;
  return g;
}

std::string WeightSequence::describe() const {
  switch (kind_) {
    case Kind::power: return "power:" + q_.str();
    case Kind::linear: return "linear:" + slope_.str() + "+" + offset_.str();
    case Kind::table: return "table[" + std::to_string(table_.size()) + "]";
    case Kind::expo: return "expo:" + base_.str();
    case Kind::product: return "product:" + base_.str();
  }
  return "?";
}

IndexDilationBound index_dilation_bound(const WeightSequence& m, const Rational& c,
                                   std::int64_t N) {
  if (!(c > Rational(0)))
    throw Error(Error::Code::invalid_spec, "index dilation bound requires c > 0");
  IndexDilationBound out;
  const std::int64_t limit = std::min(N, m.index_limit());
  // Indices ceil(k*c) must stay within range too.
  double sup = 0.0;
  bool exact_all = m.is_integer_valued() || m.kind() == WeightSequence::Kind::linear ||
                   m.kind() == WeightSequence::Kind::table;
  Rational sup_exact(0);
  std::int64_t grew_since = 0;
  constexpr double kDivergeAt = 1e6;
  for (std::int64_t k = 1; k <= limit; ++k) {
    const std::int64_t kk = (c * Rational(k)).ceil();
    if (kk > m.index_limit()) break;
    out.tested_up_to = k;
    const double ratio = std::exp(m.log_at(kk) - m.log_at(k));
    if (ratio > sup) {
      sup = ratio;
      grew_since = k;
    }
    if (exact_all) {
      // Exact ratio for rational-valued kinds.
      try {
        Rational a, b;
        if (m.kind() == WeightSequence::Kind::linear) {
          a = m.slope() * Rational(kk) + m.offset();
          b = m.slope() * Rational(k) + m.offset();
        } else if (m.kind() == WeightSequence::Kind::table) {
          a = m.table_values()[static_cast<std::size_t>(kk - 1)];
          b = m.table_values()[static_cast<std::size_t>(k - 1)];
        } else {
          a = Rational(m.floor_at(kk));
          b = Rational(m.floor_at(k));
        }
        sup_exact = std::max(sup_exact, a / b);
      } catch (const Error&) {
        exact_all = false;
      }
    }
    if (sup > kDivergeAt && grew_since > limit / 2) {
      out.diverges = true;
      return out;
    }
  }
  // Divergence heuristic: the running sup is still being pushed up near the
  // end of the tested range and exceeds any reasonable constant.
  if (sup > kDivergeAt) {
    out.diverges = true;
    return out;
  }
  out.certified_L = sup;
  if (exact_all) out.certified_L_exact = sup_exact;
  if (m.kind() == WeightSequence::Kind::power) {
    const double analytic = std::pow(c.to_double() + 1.0, m.q().to_double());
    out.analytic_L = analytic;
  }
  return out;
}

}  // namespace densitylab
