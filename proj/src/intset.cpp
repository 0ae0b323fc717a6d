#include "densitylab/intset.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace densitylab {

namespace {

void push_merged(std::vector<Interval>& out, Interval iv) {
  if (iv.lo > iv.hi) return;
  if (!out.empty() && iv.lo <= out.back().hi + 1) {
    out.back().hi = std::max(out.back().hi, iv.hi);
  } else {
    out.push_back(iv);
  }
}

std::int64_t checked_horizon(std::int64_t h) {
  if (h < 1 || h > kCoordCap)
    throw Error(Error::Code::invalid_spec, "horizon out of range [1, 2^62]");
  return h;
}

}  // namespace

std::vector<Interval> canonicalize(std::vector<Interval> ivs, std::int64_t horizon) {
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  out.reserve(ivs.size());
  for (Interval iv : ivs) {
    iv.lo = std::max<std::int64_t>(iv.lo, 1);
    iv.hi = std::min(iv.hi, horizon);
    push_merged(out, iv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PeriodicForm
// ---------------------------------------------------------------------------

std::int64_t PeriodicForm::count_leq(std::int64_t x) const {
  if (x < 1) return 0;
  std::int64_t c = 0;
  for (const Interval& iv : prefix) {
    if (iv.lo > x) break;
    c += std::min(iv.hi, x) - iv.lo + 1;
  }
  if (x < start) return c;
  const std::int64_t span = x - start + 1;
  const std::int64_t full = span / period;
  const std::int64_t rem = span % period;  // offsets [0, rem) of the partial period
  c += full * per_period;
  for (const Interval& iv : pattern) {
    if (iv.lo >= rem) break;
    c += std::min(iv.hi, rem - 1) - iv.lo + 1;
  }
  return c;
}

void PeriodicForm::append_intervals(std::int64_t lo, std::int64_t hi,
                                    std::vector<Interval>& out) const {
  lo = std::max<std::int64_t>(lo, 1);
  if (lo > hi) return;
  for (const Interval& iv : prefix) {
    if (iv.hi < lo) continue;
    if (iv.lo > hi) break;
    push_merged(out, {std::max(iv.lo, lo), std::min(iv.hi, hi)});
  }
  if (hi < start) return;
  if (per_period == 0) return;
  const std::int64_t from = std::max(lo, start);
  if (per_period == period) {
    // Solid from `start` on.
    push_merged(out, {from, hi});
    return;
  }
  const std::int64_t periods = (hi - from) / period + 2;
  if (periods * static_cast<std::int64_t>(std::max<std::size_t>(pattern.size(), 1)) >
      (std::int64_t{1} << 23))
    throw Error(Error::Code::horizon_exceeded,
                "periodic materialization over [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "] would produce too many intervals");
  std::int64_t m = (from - start) / period;
  for (;; ++m) {
    const std::int64_t base = start + m * period;
    if (base > hi) break;
    for (const Interval& iv : pattern) {
      const std::int64_t alo = base + iv.lo;
      const std::int64_t ahi = base + iv.hi;
      if (ahi < from) continue;
      if (alo > hi) break;
      push_merged(out, {std::max(alo, from), std::min(ahi, hi)});
    }
  }
}

namespace {

class PeriodicRule final : public SetRule {
 public:
  explicit PeriodicRule(PeriodicForm form) : form_(std::move(form)) {
    if (form_.period < 1 || form_.start < 1)
      throw Error(Error::Code::invalid_spec, "periodic rule with nonpositive period/start");
    std::int64_t n = 0;
    for (const Interval& iv : form_.pattern) {
      if (iv.lo < 0 || iv.hi >= form_.period)
        throw Error(Error::Code::invalid_spec, "periodic pattern outside period");
      n += iv.length();
    }
    form_.per_period = n;
  }

  std::string name() const override { return "periodic"; }
  std::string params() const override {
    auto ivs = [](const std::vector<Interval>& v) {
      std::string s;
      for (const Interval& iv : v) {
        if (!s.empty()) s += '|';
        s += std::to_string(iv.lo) + "-" + std::to_string(iv.hi);
      }
      return s;
    };
    std::string p = "start=" + std::to_string(form_.start) +
                    ",period=" + std::to_string(form_.period) +
                    ",pattern=" + ivs(form_.pattern);
    if (!form_.prefix.empty()) p += ",prefix=" + ivs(form_.prefix);
    return p;
  }
  std::int64_t count_limit() const override { return kCoordCap; }
  std::int64_t count_leq(std::int64_t x) const override { return form_.count_leq(x); }
  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    form_.append_intervals(lo, hi, out);
  }
  const PeriodicForm* periodic() const override { return &form_; }

 private:
  PeriodicForm form_;
};

}  // namespace

std::shared_ptr<const SetRule> make_periodic_rule(PeriodicForm form) {
  return std::make_shared<PeriodicRule>(std::move(form));
}

// ---------------------------------------------------------------------------
// SetRule defaults
// ---------------------------------------------------------------------------

std::optional<std::int64_t> SetRule::element(std::int64_t k) const {
  if (k < 1) return std::nullopt;
  std::int64_t lo = 1, hi = count_limit();
  if (count_leq(hi) < k) return std::nullopt;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (count_leq(mid) >= k) hi = mid; else lo = mid + 1;
  }
  return lo;
}

double SetRule::log_element(std::int64_t) const {
  return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// IntegerSet
// ---------------------------------------------------------------------------

void IntegerSet::build_cum() {
  cum_.clear();
  cum_.reserve(intervals_.size() + 1);
  cum_.push_back(0);
  for (const Interval& iv : intervals_) {
    if (iv.lo < 1 || iv.hi > horizon_ || iv.lo > iv.hi)
      throw Error(Error::Code::invalid_spec, "interval outside [1, horizon]");
    cum_.push_back(cum_.back() + iv.length());
  }
}

IntegerSet IntegerSet::from_intervals(std::vector<Interval> ivs, std::int64_t horizon) {
  IntegerSet s;
  s.horizon_ = checked_horizon(horizon);
  s.intervals_ = canonicalize(std::move(ivs), s.horizon_);
  s.build_cum();
  return s;
}

IntegerSet IntegerSet::from_elements(const std::vector<std::int64_t>& elems,
                                     std::int64_t horizon) {
  std::vector<Interval> ivs;
  ivs.reserve(elems.size());
  for (std::int64_t e : elems) ivs.push_back({e, e});
  return from_intervals(std::move(ivs), horizon);
}

IntegerSet IntegerSet::from_rule(std::shared_ptr<const SetRule> rule, std::int64_t horizon) {
  IntegerSet s;
  s.horizon_ = checked_horizon(std::min(horizon, rule->count_limit()));
  rule->append_intervals(1, s.horizon_, s.intervals_);
  s.rule_ = std::move(rule);
  s.build_cum();
  return s;
}

IntegerSet IntegerSet::empty_set(std::int64_t horizon) {
  return from_intervals({}, horizon);
}

IntegerSet IntegerSet::naturals(std::int64_t horizon) {
  PeriodicForm f;
  f.start = 1;
  f.period = 1;
  f.pattern = {{0, 0}};
  return from_rule(make_periodic_rule(std::move(f)), horizon);
}

std::int64_t IntegerSet::count_limit() const {
  return rule_ ? std::max(horizon_, rule_->count_limit()) : horizon_;
}

std::int64_t IntegerSet::size_within_horizon() const { return cum_.back(); }

std::int64_t IntegerSet::count_leq_materialized(std::int64_t x) const {
  if (x < 1 || intervals_.empty()) return 0;
  // First interval with lo > x.
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](std::int64_t v, const Interval& iv) { return v < iv.lo; });
  const std::size_t i = static_cast<std::size_t>(it - intervals_.begin());
  std::int64_t c = cum_[i];
  if (i > 0) {
    const Interval& prev = intervals_[i - 1];
    if (prev.hi > x) c -= prev.hi - x;
  }
  return c;
}

std::int64_t IntegerSet::count_leq(std::int64_t x) const {
  if (x < 1) return 0;
  if (x <= horizon_) return count_leq_materialized(x);
  if (rule_ && x <= rule_->count_limit()) return rule_->count_leq(x);
  throw Error(Error::Code::horizon_exceeded,
              "count at " + std::to_string(x) + " exceeds horizon " +
                  std::to_string(horizon_) + " and no rule permits extension");
}

std::int64_t IntegerSet::count(std::int64_t a, std::int64_t b) const {
  if (a < 1 || a > b)
    throw Error(Error::Code::invalid_spec, "count window requires 1 <= a <= b");
  return count_leq(b) - count_leq(a - 1);
}

bool IntegerSet::contains(std::int64_t x) const {
  if (x < 1) return false;
  return count_leq(x) - count_leq(x - 1) == 1;
}

std::optional<std::int64_t> IntegerSet::element(std::int64_t k) const {
  if (k < 1) return std::nullopt;
  if (k <= size_within_horizon()) {
    auto it = std::lower_bound(cum_.begin() + 1, cum_.end(), k);
    const std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
    return intervals_[i].lo + (k - cum_[i] - 1);
  }
  if (rule_) return rule_->element(k);
  return std::nullopt;
}

std::vector<std::int64_t> IntegerSet::first_elements(std::int64_t n) const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(std::min<std::int64_t>(n, 1 << 20)));
  for (const Interval& iv : intervals_) {
    for (std::int64_t x = iv.lo; x <= iv.hi; ++x) {
      if (static_cast<std::int64_t>(out.size()) == n) return out;
      out.push_back(x);
    }
  }
  while (static_cast<std::int64_t>(out.size()) < n) {
    auto e = element(static_cast<std::int64_t>(out.size()) + 1);
    if (!e) break;
    out.push_back(*e);
  }
  return out;
}

IntegerSet IntegerSet::with_horizon(std::int64_t h) const {
  checked_horizon(h);
  if (h == horizon_) return *this;
  if (h < horizon_) {
    IntegerSet s;
    s.horizon_ = h;
    for (const Interval& iv : intervals_) {
      if (iv.lo > h) break;
      s.intervals_.push_back({iv.lo, std::min(iv.hi, h)});
    }
    s.rule_ = rule_;
    s.build_cum();
    return s;
  }
  if (!rule_)
    throw Error(Error::Code::horizon_exceeded,
                "cannot extend horizon: no generator rule attached");
  // Geometric extension so that repeated small extensions re-materialize
  // O(log) times overall.
  std::int64_t target = horizon_;
  while (target < h) target = target > kCoordCap / 2 ? kCoordCap : target * 2;
  target = std::min(target, rule_->count_limit());
  target = std::max(target, std::min(h, rule_->count_limit()));
  if (target < h)
    throw Error(Error::Code::horizon_exceeded,
                "rule cannot extend to " + std::to_string(h));
  return from_rule(rule_, target);
}

// ---------------------------------------------------------------------------
// Boolean combinators
// ---------------------------------------------------------------------------

namespace {

std::vector<Interval> union_ivs(const std::vector<Interval>& a,
                                const std::vector<Interval>& b,
                                std::int64_t horizon) {
  std::vector<Interval> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return canonicalize(std::move(all), horizon);
}

std::vector<Interval> intersect_ivs(const std::vector<Interval>& a,
                                    const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t lo = std::max(a[i].lo, b[j].lo);
    const std::int64_t hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) push_merged(out, {lo, hi});
    if (a[i].hi < b[j].hi) ++i; else ++j;
  }
  return out;
}

std::vector<Interval> subtract_ivs(const std::vector<Interval>& a,
                                   const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const Interval& iv : a) {
    std::int64_t cur = iv.lo;
    while (j < b.size() && b[j].hi < cur) ++j;
    std::size_t k = j;
    while (cur <= iv.hi) {
      if (k >= b.size() || b[k].lo > iv.hi) {
        push_merged(out, {cur, iv.hi});
        break;
      }
      if (b[k].lo > cur) push_merged(out, {cur, std::min(iv.hi, b[k].lo - 1)});
      cur = std::max(cur, b[k].hi + 1);
      ++k;
    }
  }
  return out;
}

std::int64_t lcm_capped(std::int64_t a, std::int64_t b, std::int64_t cap) {
  const std::int64_t g = std::gcd(a, b);
  const __int128 l = static_cast<__int128>(a / g) * b;
  return l > cap ? 0 : static_cast<std::int64_t>(l);
}

// Tries to carry periodic backing through a boolean combination.
std::shared_ptr<const SetRule> compose_periodic(const PeriodicForm* pa,
                                                const PeriodicForm* pb, SetOp op) {
  constexpr std::int64_t kMaxPeriod = 1 << 20;
  constexpr std::int64_t kMaxStart = 1 << 20;
  if (!pa || !pb) return nullptr;
  const std::int64_t period = lcm_capped(pa->period, pb->period, kMaxPeriod);
  const std::int64_t start = std::max(pa->start, pb->start);
  if (period == 0 || start > kMaxStart) return nullptr;

  auto window = [&](const PeriodicForm& f) {
    std::vector<Interval> ivs;
    f.append_intervals(start, start + period - 1, ivs);
    return ivs;
  };
  std::vector<Interval> wa = window(*pa), wb = window(*pb), wr;
  switch (op) {
    case SetOp::unite: wr = union_ivs(wa, wb, kCoordCap); break;
    case SetOp::intersect: wr = intersect_ivs(wa, wb); break;
    case SetOp::subtract: wr = subtract_ivs(wa, wb); break;
    case SetOp::sym_diff:
      wr = subtract_ivs(union_ivs(wa, wb, kCoordCap), intersect_ivs(wa, wb));
      break;
    case SetOp::complement: return nullptr;  // handled via subtract from N
  }
  // Pattern element at offset p-1 may merge with offset 0 of the next period;
  // keeping them split is still canonical per period.
  PeriodicForm form;
  form.start = start;
  form.period = period;
  for (const Interval& iv : wr) form.pattern.push_back({iv.lo - start, iv.hi - start});

  // Prefix: combined set below `start`, from the operands' own forms.
  auto below = [&](const PeriodicForm& f) {
    std::vector<Interval> ivs;
    if (start > 1) f.append_intervals(1, start - 1, ivs);
    return ivs;
  };
  std::vector<Interval> ba = below(*pa), bb = below(*pb);
  switch (op) {
    case SetOp::unite: form.prefix = union_ivs(ba, bb, kCoordCap); break;
    case SetOp::intersect: form.prefix = intersect_ivs(ba, bb); break;
    case SetOp::subtract: form.prefix = subtract_ivs(ba, bb); break;
    case SetOp::sym_diff:
      form.prefix = subtract_ivs(union_ivs(ba, bb, kCoordCap), intersect_ivs(ba, bb));
      break;
    case SetOp::complement: return nullptr;
  }
  return make_periodic_rule(std::move(form));
}

}  // namespace

IntegerSet boolean_op(const IntegerSet& a, const IntegerSet& b, SetOp op) {
  if (op == SetOp::complement) return complement(a);
  const std::int64_t horizon = std::min(a.horizon(), b.horizon());
  std::vector<Interval> ivs;
  switch (op) {
    case SetOp::unite: ivs = union_ivs(a.intervals(), b.intervals(), horizon); break;
    case SetOp::intersect: ivs = intersect_ivs(a.intervals(), b.intervals()); break;
    case SetOp::subtract: ivs = subtract_ivs(a.intervals(), b.intervals()); break;
    case SetOp::sym_diff:
      ivs = subtract_ivs(union_ivs(a.intervals(), b.intervals(), horizon),
                         intersect_ivs(a.intervals(), b.intervals()));
      break;
    case SetOp::complement: break;
  }
  IntegerSet r = IntegerSet::from_intervals(std::move(ivs), horizon);
  if (auto rule = compose_periodic(a.periodic(), b.periodic(), op))
    r = IntegerSet::from_rule(std::move(rule), horizon);
  return r;
}

IntegerSet complement(const IntegerSet& a) {
  return boolean_op(IntegerSet::naturals(a.horizon()), a, SetOp::subtract);
}

// ---------------------------------------------------------------------------
// Translation / dilation
// ---------------------------------------------------------------------------

namespace {

class TranslatedRule final : public SetRule {
 public:
  TranslatedRule(std::shared_ptr<const SetRule> base, std::int64_t k)
      : base_(std::move(base)), k_(k) {}

  std::string name() const override { return base_->name(); }
  std::string params() const override {
    return base_->params() + (k_ >= 0 ? "+" : "") + std::to_string(k_);
  }
  std::int64_t count_limit() const override {
    const std::int64_t bl = base_->count_limit();
    if (k_ >= 0) return std::min(kCoordCap, bl > kCoordCap - k_ ? kCoordCap : bl + k_);
    return bl + k_;
  }
  std::int64_t count_leq(std::int64_t x) const override {
    if (k_ >= 0) {
      if (x <= k_) return 0;
      return base_->count_leq(x - k_);
    }
    return base_->count_leq(x - k_) - base_->count_leq(-k_);
  }
  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    std::vector<Interval> tmp;
    base_->append_intervals(std::max<std::int64_t>(1, lo - k_), hi - k_, tmp);
    for (const Interval& iv : tmp) {
      const std::int64_t alo = std::max<std::int64_t>(iv.lo + k_, 1);
      const std::int64_t ahi = iv.hi + k_;
      if (ahi >= lo && alo <= hi) push_merged(out, {std::max(alo, lo), std::min(ahi, hi)});
    }
  }
  std::optional<std::int64_t> element(std::int64_t k) const override {
    if (k_ >= 0) {
      auto e = base_->element(k);
      if (!e || *e > kCoordCap - k_) return std::nullopt;
      return *e + k_;
    }
    auto e = base_->element(k + base_->count_leq(-k_));
    if (!e) return std::nullopt;
    return *e + k_;
  }
  double log_element(std::int64_t k) const override {
    // Only meaningful asymptotically; additive shifts do not change growth.
    return base_->log_element(k_ >= 0 ? k : k + base_->count_leq(-k_));
  }
  const EnumGrowth* enumeration() const override { return base_->enumeration(); }

 private:
  std::shared_ptr<const SetRule> base_;
  std::int64_t k_;
};

class DilatedRule final : public SetRule {
 public:
  DilatedRule(std::shared_ptr<const SetRule> base, std::int64_t k)
      : base_(std::move(base)), k_(k), growth_(base_->enumeration()
                                                   ? std::optional<EnumGrowth>(*base_->enumeration())
                                                   : std::nullopt) {
    if (growth_) {
      growth_->coeff *= static_cast<double>(k_);
      growth_->coeff_is_one = growth_->coeff_is_one && k_ == 1;
    }
  }

  std::string name() const override { return base_->name(); }
  std::string params() const override {
    return base_->params() + "*" + std::to_string(k_);
  }
  std::int64_t count_limit() const override {
    const std::int64_t bl = base_->count_limit();
    return bl > kCoordCap / k_ ? kCoordCap : bl * k_;
  }
  std::int64_t count_leq(std::int64_t x) const override {
    return base_->count_leq(x / k_);
  }
  void append_intervals(std::int64_t lo, std::int64_t hi,
                        std::vector<Interval>& out) const override {
    std::vector<Interval> tmp;
    const std::int64_t blo = (lo + k_ - 1) / k_;
    base_->append_intervals(std::max<std::int64_t>(1, blo), hi / k_, tmp);
    for (const Interval& iv : tmp)
      for (std::int64_t x = iv.lo; x <= iv.hi; ++x) push_merged(out, {x * k_, x * k_});
  }
  std::optional<std::int64_t> element(std::int64_t k) const override {
    auto e = base_->element(k);
    if (!e || *e > kCoordCap / k_) return std::nullopt;
    return *e * k_;
  }
  double log_element(std::int64_t k) const override {
    return std::log(static_cast<double>(k_)) + base_->log_element(k);
  }
  const EnumGrowth* enumeration() const override {
    return growth_ ? &*growth_ : nullptr;
  }

 private:
  std::shared_ptr<const SetRule> base_;
  std::int64_t k_;
  std::optional<EnumGrowth> growth_;
};

std::shared_ptr<const SetRule> translate_periodic(const PeriodicForm& f, std::int64_t k) {
  PeriodicForm g;
  g.period = f.period;
  std::int64_t shifted_start = f.start + k;
  if (shifted_start < 1) {
    const std::int64_t deficit = 1 - shifted_start;
    shifted_start += ((deficit + f.period - 1) / f.period) * f.period;
  }
  g.start = shifted_start;
  // Offsets are preserved; realigning start by whole periods keeps them valid.
  g.pattern = f.pattern;
  if (g.start > 1) {
    // Prefix of the shifted set: shift f's content and clip to [1, start-1].
    std::vector<Interval> tmp;
    const std::int64_t lo = std::max<std::int64_t>(1, 1 - k);
    const std::int64_t hi = g.start - 1 - k;
    if (hi >= lo) f.append_intervals(lo, hi, tmp);
    for (const Interval& iv : tmp) {
      const std::int64_t alo = iv.lo + k, ahi = iv.hi + k;
      if (ahi >= 1) push_merged(g.prefix, {std::max<std::int64_t>(alo, 1), ahi});
    }
  }
  return make_periodic_rule(std::move(g));
}

std::shared_ptr<const SetRule> dilate_periodic(const PeriodicForm& f, std::int64_t k) {
  constexpr std::int64_t kMaxPeriod = 1 << 20;
  if (f.period > kMaxPeriod / k) return nullptr;
  PeriodicForm g;
  g.period = f.period * k;
  if (f.start > kCoordCap / k) return nullptr;
  g.start = f.start * k;
  for (const Interval& iv : f.pattern)
    for (std::int64_t o = iv.lo; o <= iv.hi; ++o) g.pattern.push_back({o * k, o * k});
  std::vector<Interval> pre;
  if (f.start > 1) {
    std::vector<Interval> tmp;
    f.append_intervals(1, f.start - 1, tmp);
    for (const Interval& iv : tmp)
      for (std::int64_t x = iv.lo; x <= iv.hi; ++x) push_merged(g.prefix, {x * k, x * k});
  }
  return make_periodic_rule(std::move(g));
}

}  // namespace

IntegerSet translate(const IntegerSet& a, std::int64_t k) {
  if (k == 0) return a;
  if ((k > 0 ? k : -k) >= a.horizon())
    throw Error(Error::Code::invalid_spec, "translation offset must satisfy |k| < horizon");
  std::int64_t horizon;
  if (k > 0) {
    if (a.horizon() > kCoordCap - k)
      throw_overflow("translated horizon exceeds coordinate cap");
    horizon = a.horizon() + k;
  } else {
    horizon = a.horizon() + k;
  }
  std::shared_ptr<const SetRule> rule;
  if (a.rule()) {
    if (const PeriodicForm* p = a.periodic()) rule = translate_periodic(*p, k);
    else rule = std::make_shared<TranslatedRule>(a.rule_ptr(), k);
  }
  if (rule) return IntegerSet::from_rule(std::move(rule), horizon);
  std::vector<Interval> ivs;
  ivs.reserve(a.intervals().size());
  for (const Interval& iv : a.intervals()) {
    const std::int64_t lo = iv.lo + k, hi = iv.hi + k;
    if (hi < 1) continue;
    ivs.push_back({std::max<std::int64_t>(lo, 1), hi});
  }
  return IntegerSet::from_intervals(std::move(ivs), horizon);
}

IntegerSet dilate(const IntegerSet& a, std::int64_t k) {
  if (k < 1) throw Error(Error::Code::invalid_spec, "dilation factor must be >= 1");
  if (k == 1) return a;
  const std::int64_t horizon =
      a.horizon() > kCoordCap / k ? kCoordCap : a.horizon() * k;
  if (a.rule()) {
    std::shared_ptr<const SetRule> rule;
    if (const PeriodicForm* p = a.periodic()) rule = dilate_periodic(*p, k);
    if (!rule) rule = std::make_shared<DilatedRule>(a.rule_ptr(), k);
    return IntegerSet::from_rule(std::move(rule), horizon);
  }
  std::vector<Interval> ivs;
  for (const Interval& iv : a.intervals())
    for (std::int64_t x = iv.lo; x <= iv.hi; ++x) {
      if (x > horizon / k) break;
      ivs.push_back({x * k, x * k});
    }
  return IntegerSet::from_intervals(std::move(ivs), horizon);
}

GapProfile gap_profile(const IntegerSet& a, std::int64_t n) {
  if (n < 1) throw Error(Error::Code::invalid_spec, "gap profile needs n >= 1");
  GapProfile g;
  g.elements = a.first_elements(n + 1);
  if (static_cast<std::int64_t>(g.elements.size()) < n + 1)
    throw Error(Error::Code::insufficient_members,
                "set has fewer than " + std::to_string(n + 1) + " members within horizon");
  g.gaps.reserve(g.elements.size() - 1);
  for (std::size_t i = 0; i + 1 < g.elements.size(); ++i) {
    g.gaps.push_back(g.elements[i + 1] - g.elements[i]);
    g.max_gap = std::max(g.max_gap, g.gaps.back());
  }
  return g;
}

// ---------------------------------------------------------------------------
// Sliding-window extremes
// ---------------------------------------------------------------------------

namespace {

// Extremes over one chunk of sorted intervals. `cum[i]` counts elements of
// intervals[0..i). Candidate n values: range ends plus the breakpoints where
// either window edge crosses an interval boundary; the count is monotone
// between consecutive breakpoints, so these suffice.
struct ChunkSweep {
  const Interval* ivs;
  std::size_t n;
  const std::int64_t* cum;

  // Count of chunk elements <= x, advancing a persistent pointer (x must be
  // nondecreasing across calls for a given pointer).
  std::int64_t count_at(std::size_t& ptr, std::int64_t x) const {
    while (ptr < n && ivs[ptr].hi <= x) ++ptr;
    std::int64_t c = cum[ptr];
    if (ptr < n && ivs[ptr].lo <= x) c += x - ivs[ptr].lo + 1;
    return c;
  }
  std::int64_t count_bsearch(std::int64_t x) const {
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (ivs[mid].hi <= x) lo = mid + 1; else hi = mid;
    }
    std::int64_t c = cum[lo];
    if (lo < n && ivs[lo].lo <= x) c += x - ivs[lo].lo + 1;
    return c;
  }
  std::int64_t window_count(std::int64_t nn, std::int64_t w) const {
    return count_bsearch(nn + w) - count_bsearch(nn);
  }
};

void sweep_chunk(const ChunkSweep& ch, std::int64_t w, std::int64_t n_lo,
                 std::int64_t n_hi, bool first_chunk, WindowExtremes& ext,
                 bool& seeded) {
  auto consider = [&](std::int64_t nn, std::int64_t cnt) {
    if (!seeded) {
      ext = {cnt, cnt, nn, nn};
      seeded = true;
      return;
    }
    if (cnt < ext.min_count) { ext.min_count = cnt; ext.argmin_n = nn; }
    if (cnt > ext.max_count) { ext.max_count = cnt; ext.argmax_n = nn; }
  };

  if (first_chunk) consider(n_lo, ch.window_count(n_lo, w));
  consider(n_hi, ch.window_count(n_hi, w));

  // Four sorted candidate streams with monotone count pointers. Boundary
  // candidates duplicate the endpoint evaluations above, which is harmless.
  std::size_t pa = 0, pb = 0, pc = 0, pd = 0;
  for (std::size_t i = 0; i < ch.n; ++i) {
    const Interval& iv = ch.ivs[i];
    // Window starting at the interval: n = lo - 1.
    std::int64_t nn = iv.lo - 1;
    if (nn >= n_lo && nn <= n_hi)
      consider(nn, ch.count_at(pa, nn + w) - ch.cum[i]);
    // Window ending at the interval: n = hi - w.
    nn = iv.hi - w;
    if (nn >= n_lo && nn <= n_hi)
      consider(nn, ch.cum[i + 1] - ch.count_at(pb, nn));
    // Window starting just past the interval: n = hi.
    nn = iv.hi;
    if (nn >= n_lo && nn <= n_hi)
      consider(nn, ch.count_at(pc, nn + w) - ch.cum[i + 1]);
    // Window ending just before the interval: n = lo - 1 - w.
    nn = iv.lo - 1 - w;
    if (nn >= n_lo && nn <= n_hi)
      consider(nn, ch.cum[i] - ch.count_at(pd, nn));
  }
}

std::vector<WindowExtremes> window_extremes_periodic(const PeriodicForm& p,
                                                     const std::vector<std::int64_t>& ws,
                                                     std::int64_t n_lo, std::int64_t n_hi) {
  // Pure periodic region, range covers all residues: extremes over residues.
  std::vector<char> member(static_cast<std::size_t>(p.period), 0);
  for (const Interval& iv : p.pattern)
    for (std::int64_t o = iv.lo; o <= iv.hi; ++o) member[static_cast<std::size_t>(o)] = 1;
  std::vector<std::int64_t> pre(static_cast<std::size_t>(p.period) + 1, 0);
  for (std::int64_t o = 0; o < p.period; ++o) pre[o + 1] = pre[o] + member[o];

  // Count of pattern offsets in the cyclic window [r, r+v).
  auto cyclic = [&](std::int64_t r, std::int64_t v) {
    const std::int64_t end = r + v;
    if (end <= p.period) return pre[end] - pre[r];
    return (pre[p.period] - pre[r]) + pre[end - p.period];
  };

  std::vector<WindowExtremes> out;
  out.reserve(ws.size());
  for (std::int64_t w : ws) {
    const std::int64_t base = p.per_period * (w / p.period);
    const std::int64_t v = w % p.period;
    WindowExtremes ext;
    bool seeded = false;
    for (std::int64_t r = 0; r < p.period; ++r) {
      const std::int64_t cnt = base + cyclic(r, v);
      // Smallest n >= n_lo with (n + 1 - start) mod period == r.
      std::int64_t n0 = n_lo + ((r - (n_lo + 1 - p.start)) % p.period + p.period) % p.period;
      if (n0 > n_hi) continue;
      if (!seeded) { ext = {cnt, cnt, n0, n0}; seeded = true; continue; }
      if (cnt < ext.min_count) { ext.min_count = cnt; ext.argmin_n = n0; }
      if (cnt > ext.max_count) { ext.max_count = cnt; ext.argmax_n = n0; }
    }
    out.push_back(ext);
  }
  return out;
}

}  // namespace

std::vector<WindowExtremes> window_extremes_multi(const IntegerSet& a,
                                                  const std::vector<std::int64_t>& ws,
                                                  std::int64_t n_lo, std::int64_t n_hi) {
  if (ws.empty()) return {};
  std::int64_t w_max = 0;
  for (std::int64_t w : ws) {
    if (w < 1) throw Error(Error::Code::invalid_spec, "window length must be >= 1");
    w_max = std::max(w_max, w);
  }
  if (n_lo < 0 || n_lo > n_hi)
    throw Error(Error::Code::invalid_spec, "window position range must satisfy 0 <= n_lo <= n_hi");
  if (n_hi > kCoordCap - w_max || n_hi + w_max > a.count_limit())
    throw Error(Error::Code::horizon_exceeded,
                "window scan reaches " + std::to_string(n_hi) + "+" +
                    std::to_string(w_max) + " beyond the exact-count limit");

  // Periodic closed form: every residue appears in the range, and windows stay
  // inside the periodic region.
  if (const PeriodicForm* p = a.periodic()) {
    if (n_lo + 1 >= p->start && n_hi - n_lo + 1 >= p->period)
      return window_extremes_periodic(*p, ws, n_lo, n_hi);
  }

  std::vector<WindowExtremes> out(ws.size());
  std::vector<char> seeded(ws.size(), 0);

  const bool materialized = n_hi + w_max <= a.horizon();
  if (materialized) {
    // Only intervals meeting (n_lo, n_hi + w_max] can influence any window.
    const std::vector<Interval>& ivs = a.intervals();
    auto first = std::partition_point(ivs.begin(), ivs.end(),
                                      [&](const Interval& iv) { return iv.hi <= n_lo; });
    auto last = std::partition_point(first, ivs.end(), [&](const Interval& iv) {
      return iv.lo <= n_hi + w_max;
    });
    const std::size_t count = static_cast<std::size_t>(last - first);
    std::vector<std::int64_t> cum(count + 1, 0);
    for (std::size_t i = 0; i < count; ++i) cum[i + 1] = cum[i] + first[i].length();
    const ChunkSweep ch{count ? &*first : nullptr, count, cum.data()};
    for (std::size_t k = 0; k < ws.size(); ++k) {
      bool s = false;
      sweep_chunk(ch, ws[k], n_lo, n_hi, true, out[k], s);
      seeded[k] = s;
    }
  } else {
    const SetRule* rule = a.rule();
    if (!rule)
      throw Error(Error::Code::horizon_exceeded, "window scan beyond horizon without a rule");
    // Stream in position chunks; each chunk owns candidate positions
    // n in [c_lo, c_hi] and reads intervals in [c_lo+1, c_hi+w_max].
    const std::int64_t span = n_hi - n_lo + 1;
    std::int64_t chunk_span = std::max<std::int64_t>({4 * w_max, span / 256, std::int64_t{1} << 20});
    std::vector<Interval> ivs;
    std::vector<std::int64_t> cum;
    for (std::int64_t c_lo = n_lo; c_lo <= n_hi;) {
      const std::int64_t c_hi = std::min(n_hi, c_lo + chunk_span - 1);
      ivs.clear();
      rule->append_intervals(c_lo + 1, c_hi + w_max, ivs);
      cum.assign(ivs.size() + 1, 0);
      for (std::size_t i = 0; i < ivs.size(); ++i) cum[i + 1] = cum[i] + ivs[i].length();
      ChunkSweep ch{ivs.data(), ivs.size(), cum.data()};
      for (std::size_t k = 0; k < ws.size(); ++k) {
        WindowExtremes ext;
        bool s = false;
        sweep_chunk(ch, ws[k], c_lo, c_hi, c_lo == n_lo, ext, s);
        if (!s) continue;
        if (!seeded[k]) { out[k] = ext; seeded[k] = 1; continue; }
        if (ext.min_count < out[k].min_count) {
          out[k].min_count = ext.min_count;
          out[k].argmin_n = ext.argmin_n;
        }
        if (ext.max_count > out[k].max_count) {
          out[k].max_count = ext.max_count;
          out[k].argmax_n = ext.argmax_n;
        }
      }
      c_lo = c_hi + 1;
    }
  }
  for (std::size_t k = 0; k < ws.size(); ++k) {
    if (!seeded[k]) out[k] = {0, 0, n_lo, n_lo};
  }
  return out;
}

WindowExtremes window_extremes(const IntegerSet& a, std::int64_t w,
                               std::int64_t n_lo, std::int64_t n_hi) {
  return window_extremes_multi(a, {w}, n_lo, n_hi)[0];
}

}  // namespace densitylab
