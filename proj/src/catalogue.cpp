#include "densitylab/catalogue.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>

#include "densitylab/weights.hpp"

namespace densitylab {

namespace {

// --------------------------------------------------------------------------
// Spec-string parsing: "name" or "name:key=value,key=value".
// --------------------------------------------------------------------------

struct ParsedSpec {
  std::string name;
  std::map<std::string, std::string> kv;

  const std::string& get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw Error(Error::Code::invalid_spec, "rule spec missing parameter '" + key + "'");
    return it->second;
  }
  std::string get_or(const std::string& key, const std::string& dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }
  std::int64_t get_int(const std::string& key) const {
    const Rational r = parse_rational(get(key));
    if (r.den != 1) throw Error(Error::Code::invalid_spec, "'" + key + "' must be an integer");
    return r.num;
  }
  std::int64_t get_int_or(const std::string& key, std::int64_t dflt) const {
    return kv.count(key) ? get_int(key) : dflt;
  }
};

ParsedSpec parse_spec(const std::string& spec) {
  ParsedSpec p;
  const auto colon = spec.find(':');
  p.name = spec.substr(0, colon);
  if (colon == std::string::npos) return p;
  std::string rest = spec.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string item = rest.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(Error::Code::invalid_spec, "bad rule parameter '" + item + "'");
    p.kv[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return p;
}

std::vector<Interval> parse_interval_list(const std::string& s) {
  std::vector<Interval> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto bar = s.find('|', pos);
    if (bar == std::string::npos) bar = s.size();
    const std::string item = s.substr(pos, bar - pos);
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos)
      throw Error(Error::Code::invalid_spec, "bad interval '" + item + "'");
    out.push_back({std::stoll(item.substr(0, dash)), std::stoll(item.substr(dash + 1))});
    pos = bar + 1;
  }
  return out;
}

// --------------------------------------------------------------------------
// Rule backed by a precomputed interval list (seeded random families).
// --------------------------------------------------------------------------

class ExplicitBackedRule : public SetRule {
 public:
  ExplicitBackedRule(std::string name, std::string params, std::vector<Interval> ivs,
                     std::int64_t limit, std::optional<EnumGrowth> growth)
      : name_(std::move(name)),
        params_(std::move(params)),
        ivs_(std::move(ivs)),
        limit_(limit),
        growth_(growth) {
    cum_.assign(ivs_.size() + 1, 0);
    for (std::size_t i = 0; i < ivs_.size(); ++i) cum_[i + 1] = cum_[i] + ivs_[i].length();
  }

  std::string name() const override { return name_; }
  std::string params() const override { return params_; }
  std::int64_t count_limit() const override { return limit_; }

  std::int64_t count_leq(std::int64_t x) const override {
    if (x < 1 || ivs_.empty()) return 0;
    std::size_t lo = 0, hi = ivs_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (ivs_[mid].hi <= x) lo = mid + 1; else hi = mid;
    }
    std::int64_t c = cum_[lo];
    if (lo < ivs_.size() && ivs_[lo].lo <= x) c += x - ivs_[lo].lo + 1;
    return c;
  }

  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    for (const Interval& iv : ivs_) {
      if (iv.hi < lo) continue;
      if (iv.lo > hi) break;
      out.push_back({std::max(iv.lo, lo), std::min(iv.hi, hi)});
    }
  }

  const EnumGrowth* enumeration() const override { return growth_ ? &*growth_ : nullptr; }

 private:
  std::string name_, params_;
  std::vector<Interval> ivs_;
  std::vector<std::int64_t> cum_;
  std::int64_t limit_;
  std::optional<EnumGrowth> growth_;
};

// --------------------------------------------------------------------------
// n_k = floor(C * k^P) for rational C > 0, P >= 1.
// --------------------------------------------------------------------------

class PowerEnumRule : public SetRule {
 public:
  PowerEnumRule(Rational coeff, Rational exponent)
      : coeff_(coeff), exponent_(exponent) {
    if (!(coeff_ > Rational(0)))
      throw Error(Error::Code::invalid_spec, "power rule requires coeff > 0");
    if (exponent_ < Rational(1))
      throw Error(Error::Code::invalid_spec, "power rule requires exponent >= 1");
    if (element_value(1) < 1)
      throw Error(Error::Code::invalid_spec, "power rule must start at >= 1");
    growth_.kind = EnumGrowth::Kind::polynomial;
    growth_.exponent = exponent_;
    growth_.coeff = coeff_.to_double();
    growth_.coeff_is_one = coeff_ == Rational(1);
    growth_.gaps_bounded = exponent_ == Rational(1);
  }

  std::string name() const override { return "power"; }
  std::string params() const override {
    return "coeff=" + coeff_.str() + ",exponent=" + exponent_.str();
  }
  std::int64_t count_limit() const override { return kCoordCap; }

  // floor(C * k^P) via exact comparisons m <= C*k^P <=> (m*cd)^pb <= (cn^pb)*k^pa.
  std::int64_t element_value(std::int64_t k) const {
    // Estimate then fix. The estimate is within a few ulps for our ranges.
    const double est = coeff_.to_double() * std::pow(static_cast<double>(k),
                                                     exponent_.to_double());
    if (est > 9.4e18) throw_overflow("enumeration element exceeds the coordinate cap");
    std::int64_t m = static_cast<std::int64_t>(est);
    while (m > 0 && !le_value(m, k)) --m;
    while (le_value(m + 1, k)) ++m;
    return m;
  }

  std::optional<std::int64_t> element(std::int64_t k) const override {
    if (k < 1) return std::nullopt;
    try {
      const std::int64_t v = element_value(k);
      if (v > kCoordCap) return std::nullopt;
      return v;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  double log_element(std::int64_t k) const override {
    return std::log(coeff_.to_double()) +
           exponent_.to_double() * std::log(static_cast<double>(k));
  }

  std::int64_t count_leq(std::int64_t x) const override {
    if (x < element_value(1)) return 0;
    // Largest k with floor(C k^P) <= x <=> C k^P < x + 1.
    std::int64_t lo = 1, hi = 2;
    while (lt_bound(hi, x + 1)) {
      if (hi > (std::int64_t{1} << 61)) break;
      hi *= 2;
    }
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (lt_bound(mid, x + 1)) lo = mid; else hi = mid - 1;
    }
    return lo;
  }

  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    std::int64_t k = count_leq(lo - 1) + 1;
    for (;; ++k) {
      std::int64_t v;
      try {
        v = element_value(k);
      } catch (const Error&) {
        break;
      }
      if (v > hi) break;
      if (v >= lo) {
        if (!out.empty() && out.back().hi + 1 >= v)
          out.back().hi = std::max(out.back().hi, v);
        else out.push_back({v, v});
      }
    }
  }

  const EnumGrowth* enumeration() const override { return &growth_; }

 private:
  // m <= C * k^P ?
  bool le_value(std::int64_t m, std::int64_t k) const {
    if (m < 1) return true;
    return cmp_pow(m, k) <= 0;
  }
  // C * k^P < b ?
  bool lt_bound(std::int64_t k, std::int64_t b) const {
    return cmp_pow(b, k) > 0;
  }
  // sign of (m * cd)^pb - cn^pb * k^pa, computed exactly.
  int cmp_pow(std::int64_t m, std::int64_t k) const {
    const std::int64_t pa = exponent_.num, pb = exponent_.den;
    const std::int64_t cn = coeff_.num, cd = coeff_.den;
    auto powm = [](std::int64_t base, std::int64_t e) -> std::optional<unsigned __int128> {
      unsigned __int128 acc = 1;
      const unsigned __int128 lim = ~static_cast<unsigned __int128>(0);
      for (std::int64_t i = 0; i < e; ++i) {
        if (base != 0 && acc > lim / static_cast<unsigned __int128>(base)) return std::nullopt;
        acc *= static_cast<unsigned __int128>(base);
      }
      return acc;
    };
    auto mul = [](unsigned __int128 a, unsigned __int128 b) -> std::optional<unsigned __int128> {
      if (a != 0 && b > ~static_cast<unsigned __int128>(0) / a) return std::nullopt;
      return a * b;
    };
    const auto lhs_base = mul(static_cast<unsigned __int128>(m), static_cast<unsigned __int128>(cd));
    std::optional<unsigned __int128> lhs, rhs;
    if (lhs_base && *lhs_base <= static_cast<unsigned __int128>(INT64_MAX))
      lhs = powm(static_cast<std::int64_t>(*lhs_base), pb);
    const auto cnp = powm(cn, pb);
    const auto kpa = powm(k, pa);
    if (cnp && kpa) rhs = mul(*cnp, *kpa);
    if (lhs && rhs) return *lhs < *rhs ? -1 : (*lhs > *rhs ? 1 : 0);
    // Arbitrary precision fallback.
    mpz_t L, R, T;
    mpz_init(L); mpz_init(R); mpz_init(T);
    mpz_set_si(L, m);
    mpz_mul_si(L, L, cd);
    mpz_pow_ui(L, L, static_cast<unsigned long>(pb));
    mpz_ui_pow_ui(R, static_cast<unsigned long>(cn), static_cast<unsigned long>(pb));
    mpz_ui_pow_ui(T, static_cast<unsigned long>(k), static_cast<unsigned long>(pa));
    mpz_mul(R, R, T);
    const int c = mpz_cmp(L, R);
    mpz_clear(L); mpz_clear(R); mpz_clear(T);
    return c;
  }

  Rational coeff_, exponent_;
  EnumGrowth growth_;
};

// --------------------------------------------------------------------------
// n_k = floor(k * e^k). Exact elements fit below the cap for k <= 39; counts
// stay exact for every bound below the cap. Growth is exponential, so the
// log form carries witness scans arbitrarily far.
// --------------------------------------------------------------------------

class KexpRule : public SetRule {
 public:
  KexpRule() {
    const WeightSequence f = WeightSequence::product(WeightBase::e());
    for (std::int64_t k = 1;; ++k) {
      std::int64_t v;
      try {
        v = f.floor_at(k);
      } catch (const Error&) {
        break;
      }
      elements_.push_back(v);
    }
    growth_.kind = EnumGrowth::Kind::exponential;
    growth_.gaps_bounded = false;
  }

  std::string name() const override { return "kexp"; }
  std::string params() const override { return ""; }
  std::int64_t count_limit() const override { return kCoordCap; }

  std::int64_t count_leq(std::int64_t x) const override {
    return static_cast<std::int64_t>(
        std::upper_bound(elements_.begin(), elements_.end(), x) - elements_.begin());
  }

  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    for (std::int64_t v : elements_) {
      if (v < lo) continue;
      if (v > hi) break;
      out.push_back({v, v});
    }
  }

  std::optional<std::int64_t> element(std::int64_t k) const override {
    if (k < 1 || k > static_cast<std::int64_t>(elements_.size())) return std::nullopt;
    return elements_[static_cast<std::size_t>(k - 1)];
  }

  double log_element(std::int64_t k) const override {
    return std::log(static_cast<double>(k)) + static_cast<double>(k);
  }

  const EnumGrowth* enumeration() const override { return &growth_; }

 private:
  std::vector<std::int64_t> elements_;
  EnumGrowth growth_;
};

// --------------------------------------------------------------------------
// Union of blocks [a_n, a_n + n] ("b=n") or [a_n, a_n + 1] ("b=one") with
// a_n = floor(n^E), for n >= n0 where n0 is the least index from which
// consecutive blocks stay disjoint.
// --------------------------------------------------------------------------

class BlocksRule : public SetRule {
 public:
  BlocksRule(Rational a_exp, bool plus_n) : a_exp_(a_exp), plus_n_(plus_n) {
    if (plus_n_ && a_exp_ < Rational(2))
      throw Error(Error::Code::invalid_spec,
                  "blocks with b = a + n need exponent >= 2 for disjointness");
    if (!plus_n_ && a_exp_ < Rational(6, 5))
      throw Error(Error::Code::invalid_spec,
                  "blocks with b = a + 1 need exponent >= 6/5 for disjointness");
    // Least index from which blocks are disjoint, plus a stability margin.
    std::int64_t last_bad = 0;
    for (std::int64_t n = 1; n <= 4096; ++n)
      if (block_end(n) >= a(n + 1)) last_bad = n;
    n0_ = last_bad + 1;
    // Index bound where a_n passes the coordinate cap.
    std::int64_t lo = n0_, hi = n0_ + 1;
    while (a_fits(hi)) { hi *= 2; if (hi > (std::int64_t{1} << 40)) break; }
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (a_fits(mid)) lo = mid; else hi = mid - 1;
    }
    n_cap_ = lo;
    growth_.kind = EnumGrowth::Kind::polynomial;
    if (plus_n_) {
      // count(x) ~ x^(2/E)/2, so the k-th element ~ (2k)^(E/2).
      growth_.exponent = a_exp_ / Rational(2);
      growth_.coeff = std::pow(2.0, a_exp_.to_double() / 2.0);
    } else {
      growth_.exponent = a_exp_;
      growth_.coeff = std::pow(0.5, a_exp_.to_double());
    }
    growth_.gaps_bounded = false;
  }

  std::string name() const override { return "blocks"; }
  std::string params() const override {
    return "a=" + a_exp_.str() + ",b=" + (plus_n_ ? "n" : "one");
  }
  std::int64_t count_limit() const override { return kCoordCap; }

  std::int64_t first_index() const { return n0_; }
  std::int64_t a(std::int64_t n) const { return floor_root_pow(n, a_exp_.num, a_exp_.den).value; }
  std::int64_t block_len(std::int64_t n) const { return plus_n_ ? n + 1 : 2; }
  std::int64_t block_end(std::int64_t n) const {
    const std::int64_t an = a(n);
    const std::int64_t len = block_len(n) - 1;
    return an > kCoordCap - len ? kCoordCap : an + len;
  }

  std::int64_t count_leq(std::int64_t x) const override {
    if (x < a(n0_)) return 0;
    // Largest block index with a_n <= x.
    std::int64_t lo = n0_, hi = n_cap_;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (a(mid) <= x) lo = mid; else hi = mid - 1;
    }
    std::int64_t c = cum_before(lo);
    c += std::min(x, block_end(lo)) - a(lo) + 1;
    return c;
  }

  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    // First block that can intersect [lo, hi].
    std::int64_t klo = n0_, khi = n_cap_;
    while (klo < khi) {
      const std::int64_t mid = klo + (khi - klo) / 2;
      if (block_end(mid) < lo) klo = mid + 1; else khi = mid;
    }
    for (std::int64_t n = klo; n <= n_cap_; ++n) {
      const std::int64_t an = a(n);
      if (an > hi) break;
      out.push_back({std::max(an, lo), std::min(block_end(n), hi)});
    }
  }

  const EnumGrowth* enumeration() const override { return &growth_; }

 private:
  bool a_fits(std::int64_t n) const {
    try {
      (void)a(n);
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  // Total size of blocks n0..n-1.
  std::int64_t cum_before(std::int64_t n) const {
    if (plus_n_) {
      // sum of (m + 1) for m in [n0, n-1]
      const std::int64_t lo = n0_, hi = n - 1;
      if (hi < lo) return 0;
      return (hi * (hi + 1) - (lo - 1) * lo) / 2 + (hi - lo + 1);
    }
    return 2 * std::max<std::int64_t>(0, n - n0_);
  }

  Rational a_exp_;
  bool plus_n_;
  std::int64_t n0_ = 1, n_cap_ = 1;
  EnumGrowth growth_;
};

// --------------------------------------------------------------------------
// Sparse block/cell family.
// --------------------------------------------------------------------------

struct SparseBlocks {
  Rational q, eps;
  std::int64_t s1;
  std::vector<SparseBlocksLevel> levels;
  std::vector<std::int64_t> cum;  // total count of levels before index i
};

class SparseBlocksRule : public SetRule {
 public:
  SparseBlocksRule(Rational q, Rational eps, std::int64_t s1) {
    sb_.q = q;
    sb_.eps = eps;
    sb_.s1 = s1;
    sb_.levels = sparse_blocks_schedule(q, eps, s1);
    sb_.cum.assign(sb_.levels.size() + 1, 0);
    for (std::size_t i = 0; i < sb_.levels.size(); ++i)
      sb_.cum[i + 1] = sb_.cum[i] + sb_.levels[i].cells * sb_.levels[i].per_cell;
  }

  std::string name() const override { return "sparse-blocks"; }
  std::string params() const override {
    return "q=" + sb_.q.str() + ",eps=" + sb_.eps.str() + ",s1=" + std::to_string(sb_.s1);
  }
  std::int64_t count_limit() const override { return kCoordCap; }
  const SparseBlocks& schedule() const { return sb_; }

  // Position of point i (0-based) within a cell starting at `base`.
  static std::int64_t point_at(std::int64_t base, std::int64_t width, std::int64_t c,
                               std::int64_t i) {
    return base + (2 * i + 1) * width / (2 * c);
  }

  std::int64_t count_leq(std::int64_t x) const override {
    std::int64_t total = 0;
    for (std::size_t li = 0; li < sb_.levels.size(); ++li) {
      const SparseBlocksLevel& L = sb_.levels[li];
      const std::int64_t block_lo = L.s_prime + 1;
      if (x < block_lo) break;
      const std::int64_t covered = L.cells * L.cell_width;
      if (x >= block_lo + covered - 1) {
        total += sb_.cum[li + 1] - sb_.cum[li];
        continue;
      }
      const std::int64_t off = x - block_lo;  // offset within the cell region
      const std::int64_t full = off / L.cell_width;
      total += full * L.per_cell;
      const std::int64_t base = block_lo + full * L.cell_width;
      // Points in the partial cell at positions <= x.
      std::int64_t lo = 0, hi = L.per_cell;
      while (lo < hi) {
        const std::int64_t mid = (lo + hi) / 2;
        if (point_at(base, L.cell_width, L.per_cell, mid) <= x) lo = mid + 1; else hi = mid;
      }
      total += lo;
    }
    return total;
  }

  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    for (const SparseBlocksLevel& L : sb_.levels) {
      const std::int64_t block_lo = L.s_prime + 1;
      const std::int64_t block_hi = block_lo + L.cells * L.cell_width - 1;
      if (block_hi < lo) continue;
      if (block_lo > hi) break;
      const std::int64_t jlo = std::max<std::int64_t>(0, (lo - block_lo) / L.cell_width);
      for (std::int64_t j = jlo; j < L.cells; ++j) {
        const std::int64_t base = block_lo + j * L.cell_width;
        if (base > hi) break;
        for (std::int64_t i = 0; i < L.per_cell; ++i) {
          const std::int64_t p = point_at(base, L.cell_width, L.per_cell, i);
          if (p < lo) continue;
          if (p > hi) return;
          if (!out.empty() && out.back().hi + 1 >= p)
            out.back().hi = std::max(out.back().hi, p);
          else
            out.push_back({p, p});
        }
      }
    }
  }

 private:
  SparseBlocks sb_;
};

// --------------------------------------------------------------------------
// Seeded random gap families.
// --------------------------------------------------------------------------

std::shared_ptr<const SetRule> make_bounded_gap(std::int64_t max_gap, std::uint64_t seed,
                                                std::int64_t limit) {
  if (max_gap < 1) throw Error(Error::Code::invalid_spec, "bounded-gap needs max >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Interval> ivs;
  std::int64_t x = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_gap));
  while (x <= limit) {
    if (!ivs.empty() && ivs.back().hi + 1 == x) ivs.back().hi = x;
    else ivs.push_back({x, x});
    x += 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_gap));
  }
  EnumGrowth g;
  g.kind = EnumGrowth::Kind::polynomial;
  g.exponent = Rational(1);
  g.coeff = (1.0 + static_cast<double>(max_gap)) / 2.0;
  g.gaps_bounded = true;
  return std::make_shared<ExplicitBackedRule>(
      "bounded-gap",
      "max=" + std::to_string(max_gap) + ",seed=" + std::to_string(seed) +
          ",limit=" + std::to_string(limit),
      std::move(ivs), limit, g);
}

std::shared_ptr<const SetRule> make_unbounded_gap(std::uint64_t seed, std::int64_t limit) {
  std::mt19937_64 rng(seed);
  std::vector<Interval> ivs;
  std::int64_t x = 1;
  std::int64_t index = 0, next_burst = 4, burst = 8;
  while (x <= limit) {
    if (!ivs.empty() && ivs.back().hi + 1 == x) ivs.back().hi = x;
    else ivs.push_back({x, x});
    ++index;
    if (index == next_burst) {
      x += burst;  // doubling bursts keep the gap sequence unbounded
      next_burst *= 2;
      burst *= 2;
    } else {
      x += 1 + static_cast<std::int64_t>(rng() % 3);
    }
  }
  EnumGrowth g;
  g.kind = EnumGrowth::Kind::polynomial;
  g.exponent = Rational(1);
  g.coeff = 3.0;
  g.gaps_bounded = false;
  return std::make_shared<ExplicitBackedRule>(
      "unbounded-gap", "seed=" + std::to_string(seed) + ",limit=" + std::to_string(limit),
      std::move(ivs), limit, g);
}

std::shared_ptr<const SetRule> make_progression(std::int64_t step, std::int64_t offset) {
  if (step < 1 || offset < 1)
    throw Error(Error::Code::invalid_spec, "arithmetic rule needs step, offset >= 1");
  PeriodicForm f;
  f.start = offset;
  f.period = step;
  f.pattern = {{0, 0}};
  return make_periodic_rule(std::move(f));
}

}  // namespace

std::vector<SparseBlocksLevel> sparse_blocks_schedule(const Rational& q, const Rational& eps,
                                                      std::int64_t s1) {
  if (q < Rational(1)) throw Error(Error::Code::invalid_spec, "sparse-blocks needs q >= 1");
  if (!(eps > Rational(0)) || !(eps < Rational(1)))
    throw Error(Error::Code::invalid_spec, "sparse-blocks needs eps in (0, 1)");
  if (s1 < 2) throw Error(Error::Code::invalid_spec, "sparse-blocks needs s1 >= 2");
  // cell-scale exponent (q-1) / (2q(q+eps-1)) and the two validity exponents
  const Rational ex = (q - Rational(1)) / (Rational(2) * q * (q + eps - Rational(1)));
  const Rational e1 = (q - Rational(1)) / (Rational(2) * q);
  const Rational one_m_eps = Rational(1) - eps;

  std::vector<SparseBlocksLevel> out;
  std::int64_t sp = s1;
  for (std::int64_t k = 1;; ++k) {
    SparseBlocksLevel L;
    L.s_prime = sp;
    std::int64_t block_len;
    bool last = false;
    try {
      block_len = floor_root_pow(sp, q.num, q.den).value;
    } catch (const Error&) {
      block_len = kCoordCap;  // truncated at the cap; this is the final block
      last = true;
    }
    if (sp > kCoordCap - block_len - 1) {
      block_len = kCoordCap - sp - 1;
      last = true;
      if (block_len < 1) break;
    }
    L.block_len = block_len;

    // Validity: s' >= k * s'^((q-1)/(2q)) + 2 * s'^(ex), checked with exact
    // integer ceilings (sufficient).
    const RootFloor t1 = floor_root_pow(sp, e1.num, e1.den);
    const RootFloor t2 = floor_root_pow(sp, ex.num, ex.den);
    const std::int64_t c1 = t1.exact ? t1.value : t1.value + 1;
    const std::int64_t c2 = t2.exact ? t2.value : t2.value + 1;
    if (k * c1 + 2 * c2 > sp)
      throw Error(Error::Code::invalid_spec,
                  "sparse-blocks schedule violates s' >= k*s'^((q-1)/(2q)) + "
                  "2*s'^((q-1)/(2q(q+eps-1))) at level " +
                      std::to_string(k) + "; increase s1");

    L.s = t2.value;  // floor(s'^ex)
    if (L.s < 1) L.s = 1;
    L.cell_width = floor_root_pow(L.s, q.num, q.den).value;
    if (L.cell_width < 1) L.cell_width = 1;
    const RootFloor pc = floor_root_pow(L.s, one_m_eps.num, one_m_eps.den);
    L.per_cell = pc.exact ? pc.value : pc.value + 1;  // ceil(s^(1-eps))
    if (L.per_cell > L.cell_width)
      throw Error(Error::Code::invalid_spec,
                  "sparse-blocks cell count exceeds cell width at level " + std::to_string(k));
    L.cells = L.block_len / L.cell_width;
    if (L.cells < 1)
      throw Error(Error::Code::invalid_spec,
                  "sparse-blocks block shorter than one cell at level " + std::to_string(k));
    out.push_back(L);

    if (last) break;
    sp = sp + block_len + 1;  // least next anchor keeping blocks disjoint
  }
  if (out.empty())
    throw Error(Error::Code::invalid_spec, "sparse-blocks schedule produced no blocks");
  return out;
}

std::shared_ptr<const SetRule> make_rule(const std::string& spec) {
  const ParsedSpec p = parse_spec(spec);
  if (p.name == "squares")
    return std::make_shared<PowerEnumRule>(Rational(1), Rational(2));
  if (p.name == "power")
    return std::make_shared<PowerEnumRule>(parse_rational(p.get("coeff")),
                                           parse_rational(p.get("exponent")));
  if (p.name == "kexp") return std::make_shared<KexpRule>();
  if (p.name == "blocks") {
    const std::string b = p.get("b");
    if (b != "n" && b != "one")
      throw Error(Error::Code::invalid_spec, "blocks parameter b must be 'n' or 'one'");
    return std::make_shared<BlocksRule>(parse_rational(p.get("a")), b == "n");
  }
  if (p.name == "sparse-blocks")
    return std::make_shared<SparseBlocksRule>(parse_rational(p.get_or("q", "2")),
                                              parse_rational(p.get_or("eps", "1/2")),
                                              p.get_int_or("s1", 30));
  if (p.name == "arithmetic")
    return make_progression(p.get_int("step"), p.get_int("offset"));
  if (p.name == "multiples") {
    const std::int64_t k = p.get_int("k");
    return make_progression(k, k);
  }
  if (p.name == "evens") return make_progression(2, 2);
  if (p.name == "odds") return make_progression(2, 1);
  if (p.name == "naturals") return make_progression(1, 1);
  if (p.name == "empty") {
    PeriodicForm f;
    f.start = 1;
    f.period = 1;
    return make_periodic_rule(std::move(f));
  }
  if (p.name == "bounded-gap")
    return make_bounded_gap(p.get_int("max"), static_cast<std::uint64_t>(p.get_int("seed")),
                            p.get_int_or("limit", 4'000'000));
  if (p.name == "unbounded-gap")
    return make_unbounded_gap(static_cast<std::uint64_t>(p.get_int("seed")),
                              p.get_int_or("limit", 4'000'000));
  if (p.name == "periodic") {
    PeriodicForm f;
    f.start = p.get_int("start");
    f.period = p.get_int("period");
    f.pattern = parse_interval_list(p.get("pattern"));
    if (p.kv.count("prefix")) f.prefix = parse_interval_list(p.get("prefix"));
    return make_periodic_rule(std::move(f));
  }
  throw Error(Error::Code::unknown_rule, "unknown rule '" + p.name + "'");
}

std::string rule_spec(const SetRule& rule) {
  const std::string params = rule.params();
  return params.empty() ? rule.name() : rule.name() + ":" + params;
}

IntegerSet generate_set(const std::string& spec, std::int64_t horizon) {
  return IntegerSet::from_rule(make_rule(spec), horizon);
}

const std::vector<RuleInfo>& rule_catalogue() {
  static const std::vector<RuleInfo> kRules = {
      {"squares", "", "perfect squares k^2"},
      {"power", "coeff=C,exponent=P", "n_k = floor(C * k^P)"},
      {"kexp", "", "n_k = floor(k * e^k)"},
      {"blocks", "a=E,b=n|one", "union of [floor(n^E), floor(n^E)+n] or +1 blocks"},
      {"sparse-blocks", "q=Q,eps=E,s1=S", "cells of ceil(s_k^(1-eps)) spread points"},
      {"arithmetic", "step=K,offset=O", "arithmetic progression"},
      {"multiples", "k=K", "multiples of K"},
      {"evens", "", "even numbers"},
      {"odds", "", "odd numbers"},
      {"naturals", "", "all positive integers"},
      {"empty", "", "empty set"},
      {"bounded-gap", "max=M,seed=S[,limit=L]", "random gaps in [1, M]"},
      {"unbounded-gap", "seed=S[,limit=L]", "random gaps with doubling bursts"},
      {"periodic", "start=S,period=P,pattern=..[,prefix=..]", "eventually periodic set"},
  };
  return kRules;
}

// --------------------------------------------------------------------------
// Expected density verdicts
// --------------------------------------------------------------------------

namespace {

ExpectedDensity expect(DensityKind kind, ExpectedDensity::Expect e, Rational value,
                       EvalOptions opts, std::string note) {
  ExpectedDensity x;
  x.kind = std::move(kind);
  x.expect = e;
  x.value = value;
  x.options = opts;
  x.note = std::move(note);
  return x;
}

}  // namespace

std::vector<ExpectedDensity> expected_densities(const std::string& rule_spec_str) {
  const ParsedSpec p = parse_spec(rule_spec_str);
  using E = ExpectedDensity::Expect;
  std::vector<ExpectedDensity> out;
  EvalOptions dflt;

  if (p.name == "squares") {
    const WeightSequence msq = WeightSequence::power(Rational(2));
    EvalOptions fast = dflt;
    fast.n_max = 100'000;
    out.push_back(expect(DensityKind::lower_mn(msq), E::exact_value, Rational(1), fast,
                         "count(1, n^2) = n"));
    out.push_back(expect(DensityKind::lower_q(Rational(2)), E::exact_value, Rational(1), fast, ""));
    out.push_back(expect(DensityKind::lower(), E::zero, Rational(0), dflt, ""));
    out.push_back(expect(DensityKind::upper(), E::zero, Rational(0), dflt, ""));
    EvalOptions ban = dflt;
    ban.s_max = 20;
    ban.n_max = 1'000'000;
    out.push_back(expect(DensityKind::banach_q(Tendency::liminf, Tendency::liminf, Rational(2)),
                         E::zero, Rational(0), ban, "windows dodge into the growing gaps"));
    out.push_back(expect(DensityKind::banach_q(Tendency::liminf, Tendency::limsup, Rational(2)),
                         E::zero, Rational(0), ban, ""));
    return out;
  }
  if (p.name == "kexp") {
    EvalOptions o = dflt;
    o.n_max = 40;
    out.push_back(expect(DensityKind::lower_mn(WeightSequence::expo(WeightBase::e())),
                         E::positive_finite, Rational(0), o,
                         "ratio approaches 1 like 1 - log(k)/k"));
    return out;
  }
  if (p.name == "blocks") {
    const Rational a = parse_rational(p.get("a"));
    const bool plus_n = p.get("b") == "n";
    if (plus_n) {
      // a_n = n^(2q), b_n = a_n + n for q with 2q = a.
      const Rational q = a / Rational(2);
      EvalOptions oq = dflt;
      oq.n_max = 10'000;
      out.push_back(expect(DensityKind::upper_q(q), E::bounded_by, Rational(1), oq,
                           "block partial sums stay below a_n^(1/q)"));
      EvalOptions oban = dflt;
      oban.inner_mode = InnerMode::full;
      oban.s_max = 24;
      oban.n_max = 3 * 110'075'314'176;  // covers full windows inside far blocks
      oban.blow_up_threshold = 10.0;
      oban.detect_blow_up = false;  // the suite drives a scale-matched growth check
      out.push_back(expect(DensityKind::banach_q(Tendency::limsup, Tendency::liminf, q),
                           E::infinite, Rational(0), oban, "full windows inside far blocks"));
      EvalOptions olu = dflt;
      olu.s_max = 20;
      olu.n_max = 1'000'000;
      out.push_back(expect(DensityKind::banach_q(Tendency::liminf, Tendency::limsup, q), E::zero,
                           Rational(0), olu, "windows dodge into inter-block gaps"));
    } else {
      // a_n = floor(n^a), b_n = a_n + 1; paired with q > a.
      const Rational q(2);
      EvalOptions oq = dflt;
      oq.n_max = 10'000;
      oq.blow_up_threshold = 30.0;
      out.push_back(expect(DensityKind::upper_q(q), E::infinite, Rational(0), oq,
                           "partial sums outgrow a_n^(1/q)"));
      EvalOptions olu = dflt;
      olu.s_max = 84;
      olu.outer_step = 2;
      olu.n_max = 400'000'000'000;
      olu.detect_blow_up = false;
      out.push_back(expect(DensityKind::banach_q(Tendency::limsup, Tendency::liminf, q), E::zero,
                           Rational(0), olu, "far windows meet at most one block pair"));
    }
    return out;
  }
  if (p.name == "sparse-blocks") {
    const Rational q = parse_rational(p.get_or("q", "2"));
    EvalOptions o = dflt;
    o.detect_blow_up = false;
    out.push_back(expect(DensityKind::banach_q(Tendency::limsup, Tendency::limsup, q),
                         E::infinite, Rational(0), o,
                         "block-anchored: count over block k is at least k * s'_k"));
    out.push_back(expect(DensityKind::banach_q(Tendency::limsup, Tendency::liminf, q), E::zero,
                         Rational(0), o,
                         "scale-matched: cell-scale windows in tail blocks stay sparse"));
    return out;
  }
  if (p.name == "evens" || p.name == "multiples" || p.name == "arithmetic" ||
      p.name == "naturals" || p.name == "odds") {
    std::int64_t step = 1;
    if (p.name == "evens" || p.name == "odds") step = 2;
    if (p.name == "multiples") step = p.get_int("k");
    if (p.name == "arithmetic") step = p.get_int("step");
    const Rational d(1, step);
    out.push_back(expect(DensityKind::lower(), E::exact_value, d, dflt, ""));
    out.push_back(expect(DensityKind::upper(), E::exact_value, d, dflt, ""));
    out.push_back(expect(DensityKind::lower_banach(), E::exact_value, d, dflt, ""));
    out.push_back(expect(DensityKind::upper_banach(), E::exact_value, d, dflt, ""));
    return out;
  }
  if (p.name == "empty") {
    out.push_back(expect(DensityKind::upper_banach(), E::exact_value, Rational(0), dflt, ""));
    out.push_back(expect(DensityKind::upper_q(Rational(2)), E::exact_value, Rational(0), dflt, ""));
    return out;
  }
  if (p.name == "bounded-gap") {
    EvalOptions o = dflt;
    o.n_max = 100'000;
    o.s_max = 100;
    out.push_back(expect(DensityKind::banach_mn(Tendency::liminf, Tendency::liminf,
                                                WeightSequence::power(Rational(2))),
                         E::infinite, Rational(0), o, "bounded gaps, superlinear windows"));
    return out;
  }
  if (p.name == "unbounded-gap") {
    EvalOptions o = dflt;
    o.n_max = 100'000;
    o.s_max = 100;
    out.push_back(expect(DensityKind::banach_mn(Tendency::liminf, Tendency::liminf,
                                                WeightSequence::power(Rational(2))),
                         E::zero, Rational(0), o, "gap bursts host empty windows"));
    out.push_back(expect(DensityKind::banach_mn(Tendency::liminf, Tendency::limsup,
                                                WeightSequence::power(Rational(2))),
                         E::zero, Rational(0), o, ""));
    return out;
  }
  throw Error(Error::Code::unknown_rule,
              "no expected densities catalogued for '" + p.name + "'");
}

QwsBounds qws_bounds(const std::string& blocks_spec, const Rational& q, std::int64_t n_max,
                     const EvalOptions& opts) {
  auto rule = make_rule(blocks_spec);
  const auto* blocks = dynamic_cast<const BlocksRule*>(rule.get());
  if (!blocks)
    throw Error(Error::Code::invalid_spec, "qws_bounds needs a blocks rule");

  QwsBounds out;
  double csum = 0;
  double lower_tail = 0, upper_tail = 0;
  const std::int64_t n0 = blocks->first_index();
  const double invq = 1.0 / q.to_double();
  for (std::int64_t n = n0; n <= n0 + n_max; ++n) {
    std::int64_t an, an1;
    try {
      an = blocks->a(n);
      an1 = blocks->a(n + 1);
    } catch (const Error&) {
      break;
    }
    csum += static_cast<double>(std::min(blocks->block_end(n), kCoordCap) - an + 1);
    if (n - n0 >= n_max / 2) {
      lower_tail = std::max(lower_tail, csum / std::pow(static_cast<double>(an1), invq));
      upper_tail = std::max(upper_tail, csum / std::pow(static_cast<double>(an), invq));
    }
  }
  out.lower = lower_tail;
  out.upper = upper_tail;

  IntegerSet a = IntegerSet::from_rule(rule, std::min<std::int64_t>(kDefaultHorizon, 10'000'000));
  EvalOptions o = opts;
  o.detect_blow_up = false;
  out.upper_q = evaluate(a, DensityKind::upper_q(q), o);
  const double tol = 0.05 + 0.1 * (out.upper - out.lower);
  const double lo = out.upper_q.lower_bound.to_double();
  const double hi = out.upper_q.upper_bound.to_double();
  out.estimate_within_bounds = lo >= out.lower - tol && hi <= out.upper + tol;
  return out;
}

}  // namespace densitylab
