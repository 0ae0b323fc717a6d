#include "densitylab/density.hpp"

#include <algorithm>
#include <cmath>

namespace densitylab {

// ---------------------------------------------------------------------------
// DensityKind
// ---------------------------------------------------------------------------

DensityKind DensityKind::lower() { return {}; }
DensityKind DensityKind::upper() {
  DensityKind k;
  k.inner = Tendency::limsup;
  return k;
}
DensityKind DensityKind::lower_q(Rational q) {
  DensityKind k;
  k.flavor = Flavor::q_kind;
  k.q = q;
  k.weight = WeightSequence::power(q);
  return k;
}
DensityKind DensityKind::upper_q(Rational q) {
  DensityKind k = lower_q(q);
  k.inner = Tendency::limsup;
  return k;
}
DensityKind DensityKind::lower_mn(WeightSequence m) {
  DensityKind k;
  k.flavor = Flavor::mn_kind;
  k.weight = std::move(m);
  return k;
}
DensityKind DensityKind::upper_mn(WeightSequence m) {
  DensityKind k = lower_mn(std::move(m));
  k.inner = Tendency::limsup;
  return k;
}
DensityKind DensityKind::lower_banach() {
  DensityKind k;
  k.banach = true;
  k.inner = Tendency::liminf;
  k.outer = Tendency::liminf;
  return k;
}
DensityKind DensityKind::upper_banach() {
  DensityKind k;
  k.banach = true;
  k.inner = Tendency::limsup;
  k.outer = Tendency::limsup;
  return k;
}
DensityKind DensityKind::banach_q(Tendency inner, Tendency outer, Rational q) {
  DensityKind k;
  k.banach = true;
  k.inner = inner;
  k.outer = outer;
  k.flavor = Flavor::q_kind;
  k.q = q;
  k.weight = WeightSequence::power(q);
  return k;
}
DensityKind DensityKind::banach_mn(Tendency inner, Tendency outer, WeightSequence m) {
  DensityKind k;
  k.banach = true;
  k.inner = inner;
  k.outer = outer;
  k.flavor = Flavor::mn_kind;
  k.weight = std::move(m);
  return k;
}

std::string DensityKind::label() const {
  const char* in = inner == Tendency::liminf ? "lower" : "upper";
  if (!banach) {
    switch (flavor) {
      case Flavor::classic: return in;
      case Flavor::q_kind: return std::string(in) + "-q";
      case Flavor::mn_kind: return std::string(in) + "-mn";
    }
  }
  if (flavor == Flavor::classic) return std::string(in) + "-banach";
  const char* out = outer == Tendency::liminf ? "l" : "u";
  const char* fl = flavor == Flavor::q_kind ? "q" : "mn";
  return std::string(in) + "-" + out + "-" + fl + "-banach";
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

namespace {

std::int64_t scale_at(const WeightSequence& m, std::int64_t n, bool ceil_mode) {
  return ceil_mode ? m.ceil_at(n) : m.floor_at(n);
}

std::vector<ProfilePoint> sample_profile(std::vector<ProfilePoint> full) {
  constexpr std::size_t kKeep = 512;
  if (full.size() <= kKeep) return full;
  std::vector<ProfilePoint> out;
  out.reserve(kKeep + 64);
  const std::size_t head = 64;
  for (std::size_t i = 0; i < head; ++i) out.push_back(full[i]);
  const std::size_t stride = (full.size() - head) / (kKeep - head) + 1;
  for (std::size_t i = head; i < full.size(); i += stride) out.push_back(full[i]);
  if (out.back().outer != full.back().outer) out.push_back(full.back());
  return out;
}

}  // namespace

std::vector<ProfilePoint> simple_profile(const IntegerSet& a, const WeightSequence& m,
                                         std::int64_t n, bool ceil_mode) {
  if (n < 1) throw Error(Error::Code::invalid_spec, "profile length must be >= 1");
  if (n > m.index_limit())
    throw Error(Error::Code::horizon_exceeded, "weight sequence shorter than profile");
  // Fail early if the last (largest) window exceeds the exact-count range.
  const std::int64_t top = scale_at(m, n, ceil_mode);
  if (top > a.count_limit())
    throw Error(Error::Code::horizon_exceeded,
                "profile needs counting to " + std::to_string(top) +
                    " beyond the exact-count limit " + std::to_string(a.count_limit()));
  std::vector<ProfilePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t w = scale_at(m, i, ceil_mode);
    out.push_back({i, -1, a.count_leq(w), i});
  }
  return out;
}

BanachWindowStats banach_profile(const IntegerSet& a, const WeightSequence& m,
                                 std::int64_t s, std::int64_t n_lo, std::int64_t n_hi,
                                 bool ceil_mode) {
  BanachWindowStats st;
  st.s = s;
  st.window = scale_at(m, s, ceil_mode);
  const WindowExtremes ext = window_extremes(a, st.window, n_lo, n_hi);
  st.min_count = ext.min_count;
  st.max_count = ext.max_count;
  st.inf = Rational(ext.min_count, s);
  st.sup = Rational(ext.max_count, s);
  st.argmin_n = ext.argmin_n;
  st.argmax_n = ext.argmax_n;
  return st;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace {

DensityResult exact_result(ExtRational v, std::string method) {
  DensityResult r;
  r.value = v;
  r.exact = true;
  r.lower_bound = v;
  r.upper_bound = v;
  r.method = std::move(method);
  return r;
}

bool set_is_empty(const IntegerSet& a) {
  if (!a.is_empty_within_horizon()) return false;
  if (!a.rule()) return true;
  return a.rule()->count_leq(a.rule()->count_limit()) == 0;
}

// Closed-form value where the structure decides it exactly; nullopt otherwise.
std::optional<DensityResult> closed_form_evaluate(const IntegerSet& a,
                                                  const DensityKind& kind) {
  const WeightSequence& m = kind.weight;

  if (set_is_empty(a)) return exact_result(ExtRational(Rational(0)), "closed-form:empty");

  // Vanishing weight ratio dominates everything: counts are at most m_n (+1),
  // so every kind collapses to zero.
  const auto limsup_ratio = m.ratio_limsup();
  if (limsup_ratio && limsup_ratio->is_zero())
    return exact_result(ExtRational(Rational(0)), "closed-form:weight-ratio-zero");

  const auto tendency_ratio = [&](Tendency t) {
    return t == Tendency::liminf ? m.ratio_liminf() : m.ratio_limsup();
  };

  // Eventually periodic sets: density per period settles every kind once the
  // weight ratio has an analytic limit.
  if (const PeriodicForm* p = a.periodic()) {
    const Rational rho(p->per_period, p->period);
    if (rho.is_zero()) return exact_result(ExtRational(Rational(0)), "closed-form:empty");
    if (!kind.banach) {
      if (auto L = tendency_ratio(kind.inner))
        return exact_result(ExtRational(rho) * *L, "closed-form:periodic");
      return std::nullopt;
    }
    if (kind.flavor == DensityKind::Flavor::classic)
      return exact_result(ExtRational(rho), "closed-form:periodic");
    if (auto L = m.ratio_limit()) {
      if (L->is_inf())  // bounded gaps: the whole Banach family blows up
        return exact_result(ExtRational::inf(), "closed-form:periodic");
      return exact_result(*L * ExtRational(rho), "closed-form:periodic");
    }
    return std::nullopt;
  }

  // Enumeration-backed sets with known growth.
  if (const SetRule* rule = a.rule()) {
    if (const EnumGrowth* g = rule->enumeration()) {
      if (!kind.banach) {
        // count(1, m_n)/n ~ (m_n / c)^(1/p) / n; only the clean 0 / +inf
        // separations are claimed exactly.
        if (g->kind == EnumGrowth::Kind::polynomial &&
            m.kind() == WeightSequence::Kind::power) {
          if (m.q() < g->exponent)
            return exact_result(ExtRational(Rational(0)), "closed-form:growth");
          if (m.q() > g->exponent)
            return exact_result(ExtRational::inf(), "closed-form:growth");
          return std::nullopt;  // matched exponents: estimate (value c^(-1/p))
        }
        if (g->kind == EnumGrowth::Kind::polynomial &&
            (m.kind() == WeightSequence::Kind::expo ||
             m.kind() == WeightSequence::Kind::product))
          return exact_result(ExtRational::inf(), "closed-form:growth");
        if (g->kind == EnumGrowth::Kind::exponential &&
            (m.kind() == WeightSequence::Kind::power ||
             m.kind() == WeightSequence::Kind::linear))
          return exact_result(ExtRational(Rational(0)), "closed-form:growth");
        return std::nullopt;
      }
      // Banach kinds.
      if (kind.inner == Tendency::liminf) {
        if (auto L = m.ratio_limit()) {
          if (L->is_inf())
            return exact_result(g->gaps_bounded ? ExtRational::inf()
                                                : ExtRational(Rational(0)),
                                "closed-form:gap-growth");
          // Finite limit: the lower pair equals L * lower classic Banach
          // density, which vanishes once gaps are unbounded.
          if (!g->gaps_bounded)
            return exact_result(ExtRational(Rational(0)), "closed-form:gap-growth");
        }
        return std::nullopt;
      }
      // Inner limsup with unbounded gaps and a finite weight ratio: windows in
      // the far tail eventually meet at most a bounded cluster, so the upper
      // pair also vanishes. Claimed only for the strictly superlinear
      // polynomial enumerations where gap growth is monotone.
      if (auto L = m.ratio_limit(); L && !L->is_inf() && !g->gaps_bounded &&
                                    g->kind == EnumGrowth::Kind::polynomial &&
                                    g->exponent > Rational(1))
        return exact_result(ExtRational(Rational(0)), "closed-form:gap-growth");
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Estimation
// ---------------------------------------------------------------------------

struct TailBracket {
  Rational inf;
  Rational sup;
  bool any = false;
  void add(const Rational& r) {
    if (!any) {
      inf = sup = r;
      any = true;
      return;
    }
    if (r < inf) inf = r;
    if (r > sup) sup = r;
  }
};

DensityResult estimate_simple(const IntegerSet& a, const DensityKind& kind,
                              const EvalOptions& opts) {
  const WeightSequence& m = kind.weight;
  const std::int64_t n = std::min(opts.n_max, m.index_limit());
  if (n < 2) throw Error(Error::Code::invalid_spec, "n_max too small");
  std::vector<ProfilePoint> prof = simple_profile(a, m, n, opts.ceil_windows);

  const std::int64_t tail_from = std::max<std::int64_t>(1, n / 2);
  TailBracket tail;
  for (std::int64_t i = tail_from; i <= n; ++i) tail.add(prof[static_cast<std::size_t>(i - 1)].ratio());

  DensityResult r;
  r.n_max = n;
  r.lower_bound = ExtRational(tail.inf);
  r.upper_bound = ExtRational(tail.sup);
  r.value = kind.inner == Tendency::liminf ? ExtRational(tail.inf) : ExtRational(tail.sup);
  r.method = "estimate:simple-tail";

  // Constant-profile certification: a rule-backed profile that is constant on
  // the whole range and at geometric probe points as far as exact counting
  // reaches is reported exact.
  bool constant = true;
  const Rational c0 = prof.front().ratio();
  for (const ProfilePoint& p : prof)
    if (p.ratio() != c0) {
      constant = false;
      break;
    }
  if (constant && a.rule()) {
    bool probes_ok = true;
    int probes = 0;
    for (std::int64_t pn = 2 * n; probes < 8; pn *= 2, ++probes) {
      if (pn > m.index_limit()) break;
      std::int64_t w;
      try {
        w = scale_at(m, pn, opts.ceil_windows);
      } catch (const Error&) {
        break;
      }
      if (w > a.count_limit()) break;
      if (Rational(a.count_leq(w), pn) != c0) {
        probes_ok = false;
        break;
      }
    }
    if (probes_ok && probes > 0) {
      r.exact = true;
      r.value = ExtRational(c0);
      r.lower_bound = r.upper_bound = r.value;
      r.method = "estimate:constant-profile(" + std::to_string(probes) + " probes)";
    }
  }

  r.profile = opts.keep_full_profile ? std::move(prof) : sample_profile(std::move(prof));
  return r;
}

DensityResult estimate_banach(const IntegerSet& a, const DensityKind& kind,
                              const EvalOptions& opts) {
  const WeightSequence& m = kind.weight;
  const std::int64_t s_hi = std::min(opts.s_max, m.index_limit());
  if (s_hi < 2) throw Error(Error::Code::invalid_spec, "s_max too small");
  const std::int64_t s_lo = std::max<std::int64_t>(1, s_hi / 2);
  const std::int64_t step = std::max<std::int64_t>(1, opts.outer_step);

  std::vector<std::int64_t> ss;
  for (std::int64_t s = s_hi; s >= s_lo; s -= step) ss.push_back(s);
  std::reverse(ss.begin(), ss.end());

  std::vector<std::int64_t> ws;
  ws.reserve(ss.size());
  for (std::int64_t s : ss) ws.push_back(scale_at(m, s, opts.ceil_windows));

  const std::int64_t n_hi = opts.n_max;
  const std::int64_t n_lo =
      opts.inner_mode == InnerMode::tail ? std::max<std::int64_t>(1, n_hi / 2) : 1;

  const std::vector<WindowExtremes> ext = window_extremes_multi(a, ws, n_lo, n_hi);

  TailBracket tail;
  DensityResult r;
  r.n_max = n_hi;
  r.s_max = s_hi;
  r.profile.reserve(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const std::int64_t cnt =
        kind.inner == Tendency::liminf ? ext[i].min_count : ext[i].max_count;
    const std::int64_t arg =
        kind.inner == Tendency::liminf ? ext[i].argmin_n : ext[i].argmax_n;
    tail.add(Rational(cnt, ss[i]));
    r.profile.push_back({ss[i], arg, cnt, ss[i]});
  }
  r.lower_bound = ExtRational(tail.inf);
  r.upper_bound = ExtRational(tail.sup);
  r.value = kind.outer == Tendency::liminf ? ExtRational(tail.inf) : ExtRational(tail.sup);
  r.method = std::string("estimate:banach-") +
             (opts.inner_mode == InnerMode::tail ? "tail" : "full") +
             (step > 1 ? "-stride" + std::to_string(step) : "");
  if (!opts.keep_full_profile) r.profile = sample_profile(std::move(r.profile));
  return r;
}

DensityResult estimate_with_blowup(const IntegerSet& a, const DensityKind& kind,
                                   const EvalOptions& opts) {
  DensityResult base = kind.banach ? estimate_banach(a, kind, opts)
                                   : estimate_simple(a, kind, opts);
  if (!opts.detect_blow_up || base.exact) return base;
  if (base.value.to_double() < opts.blow_up_threshold) return base;

  // Monotone growth across doublings certifies a [B, +inf) bracket.
  ExtRational prev = base.value;
  EvalOptions o = opts;
  o.detect_blow_up = false;
  bool monotone = true;
  for (int d = 0; d < opts.blow_up_doublings; ++d) {
    o.n_max *= 2;
    if (kind.banach) o.s_max *= 2;
    DensityResult next;
    try {
      next = kind.banach ? estimate_banach(a, kind, o) : estimate_simple(a, kind, o);
    } catch (const Error&) {
      monotone = false;  // could not extend the horizon; stay with the bracket
      break;
    }
    if (!(next.value > prev)) {
      monotone = false;
      break;
    }
    prev = next.value;
  }
  if (monotone && prev.to_double() > opts.blow_up_threshold) {
    base.blow_up = true;
    base.value = ExtRational::inf();
    base.lower_bound = prev;
    base.upper_bound = ExtRational::inf();
    base.method += "+blow-up";
  }
  return base;
}

}  // namespace

DensityResult evaluate(const IntegerSet& a, const DensityKind& kind,
                       const EvalOptions& opts) {
  if (opts.use_closed_form) {
    if (auto r = closed_form_evaluate(a, kind)) {
      r->n_max = opts.n_max;
      r->s_max = kind.banach ? opts.s_max : 0;
      return *r;
    }
  }
  return estimate_with_blowup(a, kind, opts);
}

// ---------------------------------------------------------------------------
// Lower q-density from an explicit enumeration
// ---------------------------------------------------------------------------

LowerQReport closed_form_lower_q(const std::vector<std::int64_t>& enumeration,
                                 const Rational& q, std::int64_t k_max) {
  if (enumeration.empty())
    throw Error(Error::Code::invalid_spec, "empty enumeration");
  for (std::size_t i = 0; i + 1 < enumeration.size(); ++i)
    if (enumeration[i] >= enumeration[i + 1])
      throw Error(Error::Code::invalid_spec, "enumeration must be strictly increasing");
  const std::int64_t k_hi =
      std::min<std::int64_t>(k_max, static_cast<std::int64_t>(enumeration.size()));
  if (k_hi < 1) throw Error(Error::Code::invalid_spec, "k_max too small");

  LowerQReport rep;
  // Per-k bracket of k / n_k^(1/q): n_k^(1/q) = n_k^(den/num) for q = num/den.
  const std::int64_t tail_from = std::max<std::int64_t>(1, k_hi / 2);
  TailBracket lo_tail, hi_tail;
  bool all_exact = true, constant = true;
  Rational first_hi;
  double max_l = 0.0;
  bool l_growing_late = false;
  for (std::int64_t k = 1; k <= k_hi; ++k) {
    const std::int64_t nk = enumeration[static_cast<std::size_t>(k - 1)];
    const RootFloor rt = floor_root_pow(nk, q.den, q.num);
    const Rational hi(k, rt.value);
    const Rational lo = rt.exact ? hi : Rational(k, rt.value + 1);
    if (!rt.exact) all_exact = false;
    if (k == 1) first_hi = hi;
    if (!rt.exact || hi != first_hi) constant = false;
    const double l_here =
        std::exp(std::log(static_cast<double>(nk)) - q.to_double() * std::log(static_cast<double>(k)));
    if (l_here > max_l) {
      max_l = l_here;
      if (k > k_hi / 2) l_growing_late = true;
    }
    if (k >= tail_from) {
      lo_tail.add(lo);
      hi_tail.add(hi);
    }
  }
  rep.min_L = max_l;
  // A bounding constant pushed up late in the range and already huge is
  // treated as divergent evidence against positivity.
  rep.ratio_diverging = l_growing_late && max_l > 1e6;

  DensityResult& r = rep.result;
  r.n_max = k_hi;
  r.lower_bound = ExtRational(lo_tail.inf);
  r.upper_bound = ExtRational(hi_tail.inf);
  r.value = r.upper_bound;
  r.method = "enumeration:k/n_k^(1/q)";
  if (all_exact && constant) {
    r.exact = true;
    r.value = ExtRational(first_hi);
    r.lower_bound = r.upper_bound = r.value;
    r.method = "enumeration:constant-exact";
  }
  rep.positive = lo_tail.inf > Rational(0) && !rep.ratio_diverging;
  return rep;
}

// ---------------------------------------------------------------------------
// Chain check
// ---------------------------------------------------------------------------

ChainCheckReport density_chain_check(const IntegerSet& a, const Rational& q,
                                     const EvalOptions& opts) {
  ChainCheckReport rep;
  rep.q = q;
  EvalOptions o = opts;
  o.detect_blow_up = false;

  rep.banach_lower = evaluate(a, DensityKind::lower_banach(), o);
  rep.lower = evaluate(a, DensityKind::lower(), o);
  rep.upper = evaluate(a, DensityKind::upper(), o);
  rep.banach_upper = evaluate(a, DensityKind::upper_banach(), o);
  rep.lower_q = evaluate(a, DensityKind::lower_q(q), o);
  rep.upper_q = evaluate(a, DensityKind::upper_q(q), o);

  auto check_le = [&](const char* name, const DensityResult& x, const DensityResult& y) {
    // Bracket-consistent ordering: the claim x <= y is refuted only when the
    // evidence separates x strictly above y.
    if (x.lower_bound > y.upper_bound) {
      rep.ok = false;
      rep.violations.push_back(std::string(name) + ": [" + x.lower_bound.str() + "," +
                               x.upper_bound.str() + "] above [" + y.lower_bound.str() +
                               "," + y.upper_bound.str() + "]");
    }
  };
  check_le("banach-lower<=lower", rep.banach_lower, rep.lower);
  check_le("lower<=upper", rep.lower, rep.upper);
  check_le("upper<=banach-upper", rep.upper, rep.banach_upper);
  if (rep.banach_upper.upper_bound > ExtRational(Rational(1))) {
    rep.ok = false;
    rep.violations.push_back("banach-upper exceeds 1");
  }
  check_le("lower<=lower-q", rep.lower, rep.lower_q);
  check_le("upper<=upper-q", rep.upper, rep.upper_q);

  // Pointwise dominance that makes the q-comparisons exact: floor(n^q) >= n.
  const std::int64_t n_probe = std::min<std::int64_t>(opts.n_max, 4096);
  const WeightSequence mq = WeightSequence::power(q);
  for (std::int64_t n = 1; n <= n_probe; ++n) {
    std::int64_t w;
    try {
      w = mq.floor_at(n);
    } catch (const Error&) {
      break;
    }
    if (w > a.count_limit()) break;
    if (a.count_leq(w) < a.count_leq(n)) {
      rep.ok = false;
      rep.violations.push_back("pointwise q-dominance failed at n=" + std::to_string(n));
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Trichotomy
// ---------------------------------------------------------------------------

const char* to_string(TrichotomyCase c) {
  switch (c) {
    case TrichotomyCase::ratio_liminf_zero: return "ratio-liminf-zero";
    case TrichotomyCase::ratio_limit_zero: return "ratio-limit-zero";
    case TrichotomyCase::ratio_limit_infinite_bounded_gaps:
      return "ratio-limit-infinite-bounded-gaps";
    case TrichotomyCase::ratio_limit_infinite_unbounded_gaps:
      return "ratio-limit-infinite-unbounded-gaps";
    case TrichotomyCase::inapplicable: return "inapplicable";
  }
  return "?";
}

TrichotomyReport trichotomy_classify(const IntegerSet& a, const WeightSequence& m,
                                     const EvalOptions& opts) {
  TrichotomyReport rep;
  const std::int64_t g_horizon =
      std::max<std::int64_t>(10, std::min<std::int64_t>(m.index_limit(), 1'000'000));
  const GrowthDiagnostics g = m.growth(g_horizon);
  rep.growth_analytic = g.analytic;

  enum class RatioClass { zero, liminf_zero, infinite, other } rc = RatioClass::other;
  if (g.limit_exists == GrowthDiagnostics::LimitExists::yes) {
    if (g.limit.is_zero()) rc = RatioClass::zero;
    else if (g.limit.is_inf()) rc = RatioClass::infinite;
  } else {
    // Numeric classification at the horizon (table weights): the tail ratio
    // range must be small and shrinking across a horizon halving.
    const GrowthDiagnostics gh = m.growth(std::max<std::int64_t>(10, g_horizon / 2));
    if (g.limsup_ratio.to_double() < 0.05 && g.limsup_ratio < gh.limsup_ratio) {
      rc = RatioClass::zero;
      rep.note = "ratio classified at horizon";
    } else if (g.liminf_ratio.is_zero()) {
      rc = RatioClass::liminf_zero;
    }
  }

  // Gap structure.
  if (const SetRule* rule = a.rule()) {
    if (const EnumGrowth* eg = rule->enumeration()) {
      rep.gaps_bounded = eg->gaps_bounded;
      rep.gaps_analytic = true;
    } else if (const PeriodicForm* p = a.periodic()) {
      rep.gaps_bounded = p->per_period > 0;
      rep.gaps_analytic = true;
    }
  }
  if (!rep.gaps_analytic) {
    const std::int64_t members = std::min<std::int64_t>(a.size_within_horizon(), 200'000);
    if (members >= 2) {
      const GapProfile gp = gap_profile(a, members - 1);
      rep.max_gap_observed = gp.max_gap;
      // A gap comparable to the horizon scale counts as unbounded evidence.
      rep.gaps_bounded = gp.max_gap * 64 < a.horizon();
      if (!rep.note.empty()) rep.note += "; ";
      rep.note += "gaps classified at horizon (max " + std::to_string(gp.max_gap) + ")";
    } else {
      rep.gaps_bounded = false;
    }
  }

  switch (rc) {
    case RatioClass::zero:
      rep.kase = TrichotomyCase::ratio_limit_zero;
      rep.predicted = ExtRational(Rational(0));
      rep.prediction_includes_simple = true;
      break;
    case RatioClass::liminf_zero:
      rep.kase = TrichotomyCase::ratio_liminf_zero;
      rep.predicted = ExtRational(Rational(0));
      rep.prediction_includes_simple = true;  // lower-l pair and d_mn only
      break;
    case RatioClass::infinite:
      if (rep.gaps_bounded) {
        rep.kase = TrichotomyCase::ratio_limit_infinite_bounded_gaps;
        rep.predicted = ExtRational::inf();
        rep.prediction_includes_simple = true;
      } else {
        rep.kase = TrichotomyCase::ratio_limit_infinite_unbounded_gaps;
        rep.predicted = ExtRational(Rational(0));
        // The simple lower (m_n)-density is not pinned down in this case:
        // squares against m_n = n^2 have lower density 1 while the Banach
        // lower pair vanishes. Only the Banach pair is predicted.
        rep.prediction_includes_simple = false;
      }
      break;
    case RatioClass::other:
      rep.kase = TrichotomyCase::inapplicable;
      return rep;
  }

  // Cross-check against estimation (closed forms off: independent route).
  EvalOptions o = opts;
  o.use_closed_form = false;
  rep.banach_lower_l =
      evaluate(a, DensityKind::banach_mn(Tendency::liminf, Tendency::liminf, m), o);
  if (rep.kase != TrichotomyCase::ratio_liminf_zero)
    rep.banach_lower_u =
        evaluate(a, DensityKind::banach_mn(Tendency::liminf, Tendency::limsup, m), o);
  if (rep.prediction_includes_simple)
    rep.simple_lower = evaluate(a, DensityKind::lower_mn(m), o);

  constexpr double kZeroTol = 0.05;
  auto matches = [&](const DensityResult& r) {
    if (rep.predicted.is_inf())
      return r.blow_up || r.value.to_double() > opts.blow_up_threshold;
    return r.upper_bound.to_double() < kZeroTol;
  };
  rep.consistent = matches(rep.banach_lower_l);
  if (rep.kase != TrichotomyCase::ratio_liminf_zero)
    rep.consistent = rep.consistent && matches(rep.banach_lower_u);
  if (rep.prediction_includes_simple)
    rep.consistent = rep.consistent && matches(rep.simple_lower);
  return rep;
}

}  // namespace densitylab
