#include "densitylab/families.hpp"

#include <algorithm>

#include "densitylab/sampling.hpp"

namespace densitylab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

FamilySpec FamilySpec::positive(DensityKind kind) {
  FamilySpec f;
  f.label = kind.label() + "-positive";
  f.kind = std::move(kind);
  return f;
}

std::vector<FamilySpec> hypercyclicity_taxonomy(const Rational& q,
                                                const WeightSequence& m) {
  std::vector<FamilySpec> out;
  auto add = [&](DensityKind k, const char* label) {
    FamilySpec f;
    f.kind = std::move(k);
    f.label = label;
    out.push_back(std::move(f));
  };
  add(DensityKind::lower(), "frequently-hypercyclic");
  add(DensityKind::lower_q(q), "q-frequently-hypercyclic");
  add(DensityKind::upper(), "upper-frequently-hypercyclic");
  add(DensityKind::upper_q(q), "upper-q-frequently-hypercyclic");
  add(DensityKind::lower_mn(m), "l-mn-hypercyclic");
  add(DensityKind::upper_mn(m), "u-mn-hypercyclic");
  add(DensityKind::lower_banach(), "lower-reiteratively-hypercyclic");
  add(DensityKind::upper_banach(), "reiteratively-hypercyclic");

  add(DensityKind::banach_q(Tendency::liminf, Tendency::liminf, q),
      "lower-l-q-reiteratively-hypercyclic");
  add(DensityKind::banach_q(Tendency::liminf, Tendency::limsup, q),
      "lower-u-q-reiteratively-hypercyclic");
  add(DensityKind::banach_q(Tendency::limsup, Tendency::liminf, q),
      "upper-l-q-reiteratively-hypercyclic");
  add(DensityKind::banach_q(Tendency::limsup, Tendency::limsup, q),
      "upper-u-q-reiteratively-hypercyclic");
  add(DensityKind::banach_mn(Tendency::liminf, Tendency::liminf, m),
      "lower-l-mn-reiteratively-hypercyclic");
  add(DensityKind::banach_mn(Tendency::liminf, Tendency::limsup, m),
      "lower-u-mn-reiteratively-hypercyclic");
  add(DensityKind::banach_mn(Tendency::limsup, Tendency::liminf, m),
      "upper-l-mn-reiteratively-hypercyclic");
  add(DensityKind::banach_mn(Tendency::limsup, Tendency::limsup, m),
      "upper-u-mn-reiteratively-hypercyclic");
  return out;
}

MembershipReport membership(const FamilySpec& f, const IntegerSet& a,
                            const EvalOptions& opts) {
  MembershipReport rep;
  rep.density = evaluate(a, f.kind, opts);
  if (rep.density.exact) {
    rep.verdict = rep.density.value.is_zero() ? Verdict::no : Verdict::yes;
  } else if (rep.density.lower_bound > ExtRational(Rational(0))) {
    rep.verdict = Verdict::yes;
  } else {
    // Finite evidence cannot separate a vanishing limit from a slow one.
    rep.verdict = Verdict::undetermined;
  }
  return rep;
}

Verdict is_member(const FamilySpec& f, const IntegerSet& a, const EvalOptions& opts) {
  return membership(f, a, opts).verdict;
}

FamilyCheckReport family_check(const WeightSequence& m, const EvalOptions& opts,
                               std::uint64_t seed, int samples) {
  FamilyCheckReport rep;
  const FamilySpec family = FamilySpec::positive(DensityKind::upper_mn(m));

  if (auto ls = m.ratio_limsup()) {
    rep.criterion_analytic = true;
    rep.limsup_ratio = *ls;
    rep.furstenberg = ls->is_zero() ? Verdict::no : Verdict::yes;
  } else {
    const std::int64_t g_horizon =
        std::max<std::int64_t>(10, std::min<std::int64_t>(m.index_limit(), 1'000'000));
    const GrowthDiagnostics g = m.growth(g_horizon);
    const GrowthDiagnostics gh = m.growth(std::max<std::int64_t>(10, g_horizon / 2));
    rep.limsup_ratio = g.limsup_ratio;
    if (g.limsup_ratio.to_double() < 0.05 && g.limsup_ratio < gh.limsup_ratio) {
      rep.furstenberg = Verdict::no;
      rep.notes.push_back("growth classified at horizon");
    } else if (g.liminf_ratio.to_double() > 0.0) {
      rep.furstenberg = Verdict::yes;
      rep.notes.push_back("growth classified at horizon");
    }
  }

  // Direct check: N itself belongs iff the upper (m_n)-density of N is positive.
  {
    EvalOptions o = opts;
    o.detect_blow_up = true;
    MembershipReport nat = membership(family, IntegerSet::naturals(), o);
    rep.naturals_member = nat.verdict;
    rep.naturals_density = std::move(nat.density);
  }

  // Properness: the empty set never belongs.
  rep.proper = is_member(family, IntegerSet::empty_set(), opts) == Verdict::no;

  // Upward closure on random subset pairs: count is pointwise monotone under
  // inclusion, so a yes for A must persist for any B containing A.
  std::mt19937_64 rng(seed);
  RandomSetParams params;
  params.horizon = std::min<std::int64_t>(opts.n_max, 100'000);
  params.intervals = 60;
  EvalOptions fast = opts;
  fast.n_max = std::min<std::int64_t>(opts.n_max, 20'000);
  fast.detect_blow_up = false;
  for (int i = 0; i < samples; ++i) {
    auto [a, b] = random_subset_pair(rng, params);
    ++rep.upward.attempted;
    Verdict va, vb;
    try {
      va = is_member(family, a, fast);
      if (va != Verdict::yes) continue;
      ++rep.upward.applicable;
      vb = is_member(family, b, fast);
    } catch (const Error&) {
      continue;  // horizon infeasible for this weight; skip the sample
    }
    if (vb == Verdict::yes) {
      ++rep.upward.passed;
    } else {
      rep.upward.failures.push_back("superset lost membership at sample " +
                                    std::to_string(i));
    }
  }

  // Witness structure of the countable decomposition, on one positive sample.
  {
    IntegerSet evens = dilate(IntegerSet::naturals(params.horizon / 2), 2);
    try {
      DecompositionReport dec = decomposition_witnesses(m, evens, fast, seed);
      rep.decomposition_ok = dec.witnessed ? dec.finite_stability_ok : true;
      if (!dec.witnessed) rep.notes.push_back("decomposition witness not found at horizon");
    } catch (const Error& e) {
      rep.notes.push_back(std::string("decomposition check skipped: ") + e.what());
    }
  }
  return rep;
}

TranslateCheckReport translate_check(const FamilySpec& f, const IntegerSet& a,
                                     const std::vector<std::int64_t>& ks,
                                     const EvalOptions& opts) {
  TranslateCheckReport rep;
  MembershipReport orig = membership(f, a, opts);
  rep.original = orig.verdict;
  rep.original_density = std::move(orig.density);

  for (std::int64_t k : ks) {
    TranslateCheckRow row;
    row.k = k;
    const IntegerSet shifted = translate(a, -k);
    MembershipReport mr = membership(f, shifted, opts);
    row.translated = mr.verdict;
    row.density = std::move(mr.density);
    // Profiles differ by at most k/n pointwise; grant that slack on top of
    // the bracket widths.
    const double tol =
        2.0 * static_cast<double>(k) / static_cast<double>(std::max<std::int64_t>(1, opts.n_max));
    const double alo = rep.original_density.lower_bound.to_double() - tol;
    const double ahi = rep.original_density.upper_bound.to_double() + tol;
    const double blo = row.density.lower_bound.to_double();
    const double bhi = row.density.upper_bound.to_double();
    row.brackets_overlap = !(bhi < alo || blo > ahi);
    if (row.translated != rep.original) rep.verdicts_agree = false;
    if (!row.brackets_overlap) rep.all_overlap = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

DecompositionReport decomposition_witnesses(const WeightSequence& m, const IntegerSet& a,
                                            const EvalOptions& opts, std::uint64_t seed) {
  DecompositionReport rep;
  const std::int64_t n_max = std::min(opts.n_max, m.index_limit());
  // nu grid: dyadic levels within [1, n_max/2].
  std::vector<std::int64_t> nus;
  for (std::int64_t nu = 1; nu <= n_max / 2; nu *= 4) nus.push_back(nu);

  // Largest dyadic delta such that every sampled nu has a witness N >= nu
  // with count(A, 1, m_N)/N > delta.
  for (int j = 1; j <= 20; ++j) {
    const Rational delta(1, std::int64_t{1} << j);
    std::vector<std::int64_t> witnesses;
    bool all = true;
    for (std::int64_t nu : nus) {
      std::int64_t found = 0;
      for (std::int64_t n = nu; n <= n_max; n = std::max(n + 1, n + n / 64)) {
        std::int64_t w;
        try {
          w = m.floor_at(n);
        } catch (const Error&) {
          break;
        }
        if (w > a.count_limit()) break;
        if (Rational(a.count_leq(w), n) > delta) {
          found = n;
          break;
        }
      }
      if (!found) {
        all = false;
        break;
      }
      witnesses.push_back(found);
    }
    if (all) {
      rep.witnessed = true;
      rep.delta = delta;
      rep.witness_n = std::move(witnesses);
      break;
    }
  }
  if (!rep.witnessed) return rep;

  // Finite stability: membership at level (delta, nu) only depends on
  // A ∩ [1, m_N] for the witness N, so supersets of that finite piece keep it.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < rep.witness_n.size(); ++i) {
    const std::int64_t n = rep.witness_n[i];
    const std::int64_t w = m.floor_at(n);
    if (w >= a.horizon()) continue;
    std::vector<Interval> head;
    a.rule() ? a.rule()->append_intervals(1, w, head)
             : void(head = boolean_op(a, IntegerSet::from_intervals({{1, w}}, a.horizon()),
                                      SetOp::intersect)
                               .intervals());
    // Superset: the head plus random extra mass.
    RandomSetParams params;
    params.horizon = a.horizon();
    params.intervals = 20;
    IntegerSet extra = random_interval_set(rng, params);
    IntegerSet b = boolean_op(IntegerSet::from_intervals(head, a.horizon()), extra,
                              SetOp::unite);
    if (!(Rational(b.count_leq(w), n) > rep.delta)) {
      rep.finite_stability_ok = false;
      break;
    }
  }
  return rep;
}

}  // namespace densitylab
