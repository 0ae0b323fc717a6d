#include "densitylab/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace densitylab {

namespace {

constexpr double kOverflowAt = 1e300;
constexpr double kBoundaryDeadZone = 1e-12;

double squash(double t) { return t / (1.0 + t); }

}  // namespace

SpaceModel SpaceModel::frechet(int dim) {
  if (dim < 1 || dim > 1000)
    throw Error(Error::Code::invalid_spec, "space dimension must be in [1, 1000]");
  SpaceModel s;
  s.kind = Kind::frechet_seq;
  s.dim = dim;
  return s;
}

SpaceModel SpaceModel::banach(int dim, std::vector<double> weights) {
  if (dim < 1 || dim > 1000)
    throw Error(Error::Code::invalid_spec, "space dimension must be in [1, 1000]");
  SpaceModel s;
  s.kind = Kind::banach_l1;
  s.dim = dim;
  if (weights.empty()) weights.assign(static_cast<std::size_t>(dim), 1.0);
  if (static_cast<int>(weights.size()) != dim)
    throw Error(Error::Code::invalid_spec, "norm weight count must equal the dimension");
  for (double w : weights)
    if (!(w > 0)) throw Error(Error::Code::invalid_spec, "norm weights must be positive");
  s.l1_weights = std::move(weights);
  return s;
}

double SpaceModel::metric(const Vec& x, const Vec& y) const {
  const std::size_t d = static_cast<std::size_t>(dim);
  if (kind == Kind::banach_l1) {
    double acc = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double xj = j < x.size() ? x[j] : 0.0;
      const double yj = j < y.size() ? y[j] : 0.0;
      acc += l1_weights[j] * std::abs(xj - yj);
    }
    return acc;
  }
  double running_max = 0;
  double acc = 0;
  double scale = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double xj = j < x.size() ? x[j] : 0.0;
    const double yj = j < y.size() ? y[j] : 0.0;
    running_max = std::max(running_max, std::abs(xj - yj));
    scale *= 0.5;
    acc += scale * squash(running_max);
  }
  // p_n is constant for n >= dim; the geometric tail sums to 2^(-dim).
  acc += scale * squash(running_max);
  return acc;
}

OperatorSpec OperatorSpec::shift(std::vector<double> weights) {
  if (weights.empty())
    throw Error(Error::Code::invalid_spec, "shift needs at least one weight");
  for (double w : weights)
    if (!(w > 0)) throw Error(Error::Code::invalid_spec, "shift weights must be positive");
  OperatorSpec op;
  op.kind = Kind::backward_shift;
  op.shift_weights = std::move(weights);
  return op;
}

OperatorSpec OperatorSpec::constant_shift(double w, int dim) {
  return shift(std::vector<double>(static_cast<std::size_t>(dim), w));
}

OperatorSpec OperatorSpec::oracle(IntegerSet planted, Vec target, Vec far) {
  OperatorSpec op;
  op.kind = Kind::planted_oracle;
  op.planted = std::move(planted);
  op.target = std::move(target);
  op.far = std::move(far);
  return op;
}

namespace {

Vec shift_step(const std::vector<double>& w, const Vec& x) {
  Vec y(w.size(), 0.0);
  for (std::size_t j = 0; j + 1 < w.size(); ++j)
    y[j] = w[j + 1] * (j + 1 < x.size() ? x[j + 1] : 0.0);
  return y;
}

bool vec_overflow(const Vec& v) {
  for (double c : v)
    if (!(std::abs(c) < kOverflowAt)) return true;
  return false;
}

}  // namespace

Vec shift_power(const std::vector<double>& weights, const Vec& x, std::int64_t n) {
  const std::size_t d = weights.size();
  Vec y(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t src = j + static_cast<std::size_t>(n);
    if (src >= d) break;
    double acc = src < x.size() ? x[src] : 0.0;
    for (std::size_t i = src; i > j; --i) acc = weights[i] * acc;
    y[j] = acc;
  }
  return y;
}

OrbitResult orbit(const OperatorSpec& op, const SpaceModel& space, const Vec& x,
                  std::int64_t n) {
  OrbitResult out;
  out.states.reserve(static_cast<std::size_t>(std::min<std::int64_t>(n, 1 << 20)));
  if (op.kind == OperatorSpec::Kind::planted_oracle) {
    for (std::int64_t i = 1; i <= n; ++i)
      out.states.push_back(op.planted.contains(i) ? op.target : op.far);
    return out;
  }
  if (static_cast<int>(op.shift_weights.size()) != space.dim)
    throw Error(Error::Code::invalid_spec, "shift weight count must equal the dimension");
  Vec cur(x);
  cur.resize(op.shift_weights.size(), 0.0);
  for (std::int64_t i = 1; i <= n; ++i) {
    cur = shift_step(op.shift_weights, cur);
    if (vec_overflow(cur)) {
      out.overflow = true;
      out.truncated_at = i;
      break;
    }
    out.states.push_back(cur);
  }
  return out;
}

HittingSet hitting_set(const OperatorSpec& op, const SpaceModel& space, const Vec& x,
                       const Ball& v, std::int64_t n) {
  HittingSet hs;
  hs.n_max = n;
  std::vector<std::int64_t> members;

  auto visit = [&](std::int64_t i, const Vec& state) {
    const double d = space.metric(state, v.center);
    if (std::abs(d - v.radius) < kBoundaryDeadZone) {
      // Open-ball membership cannot be certified this close to the boundary.
      ++hs.boundary_ambiguous;
      return;
    }
    if (d < v.radius) members.push_back(i);
  };

  if (op.kind == OperatorSpec::Kind::planted_oracle) {
    const double dt = space.metric(op.target, v.center);
    const double df = space.metric(op.far, v.center);
    if (std::abs(dt - v.radius) < kBoundaryDeadZone ||
        std::abs(df - v.radius) < kBoundaryDeadZone)
      ++hs.boundary_ambiguous;
    const bool t_in = std::abs(dt - v.radius) >= kBoundaryDeadZone && dt < v.radius;
    const bool f_in = std::abs(df - v.radius) >= kBoundaryDeadZone && df < v.radius;
    // Keeping the plant's rule attached lets the density evaluation use its
    // closed forms; the oracle's hitting set genuinely continues that way.
    const std::int64_t reach = std::min(n, op.planted.count_limit());
    IntegerSet inside = op.planted.with_horizon(reach);
    if (t_in && f_in) hs.times = IntegerSet::naturals(n);
    else if (t_in) hs.times = std::move(inside);
    else if (f_in) hs.times = complement(inside);
    else hs.times = IntegerSet::empty_set(n);
    return hs;
  }

  // Backward shift: stream the orbit without storing it.
  Vec cur(x);
  cur.resize(op.shift_weights.size(), 0.0);
  for (std::int64_t i = 1; i <= n; ++i) {
    cur = shift_step(op.shift_weights, cur);
    if (vec_overflow(cur)) {
      hs.orbit_overflow = true;
      hs.n_max = i - 1;
      break;
    }
    visit(i, cur);
  }
  hs.times = IntegerSet::from_elements(members, std::max<std::int64_t>(hs.n_max, 1));
  return hs;
}

const FamilyVerdictRow* ClassificationReport::row(const std::string& family) const {
  for (const FamilyVerdictRow& r : rows)
    if (r.family == family) return &r;
  return nullptr;
}

EvalOptions fit_evaluation_window(const EvalOptions& opts, const WeightSequence& m,
                                  std::int64_t horizon) {
  EvalOptions o = opts;
  o.detect_blow_up = false;
  // Largest n with floor(m_n) <= horizon.
  std::int64_t lo = 1, hi = std::min<std::int64_t>(opts.n_max, m.index_limit());
  auto fits = [&](std::int64_t n) {
    try {
      return m.floor_at(n) <= horizon;
    } catch (const Error&) {
      return false;
    }
  };
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (fits(mid)) lo = mid; else hi = mid - 1;
  }
  o.n_max = lo;
  // Window scales small enough to slide within the horizon.
  std::int64_t s = std::min<std::int64_t>(opts.s_max, m.index_limit());
  while (s > 2 && !fits(s)) --s;
  while (s > 2 && m.floor_at(s) > horizon / 2) --s;
  o.s_max = s;
  // Window positions must keep n + floor(m_s) within the horizon.
  if (s >= 1 && fits(s))
    o.n_max = std::max<std::int64_t>(4, std::min(o.n_max, horizon - m.floor_at(s) - 1));
  return o;
}

ClassificationReport classify(const OperatorSpec& op, const SpaceModel& space, const Vec& x,
                              const std::vector<Ball>& grid, const Rational& q,
                              const WeightSequence& m, const EvalOptions& opts) {
  if (grid.empty()) throw Error(Error::Code::invalid_spec, "ball grid must be non-empty");
  ClassificationReport rep;
  rep.n_max = opts.n_max;
  const std::vector<FamilySpec> taxonomy = hypercyclicity_taxonomy(q, m);
  rep.rows.reserve(taxonomy.size());

  rep.hits.reserve(grid.size());
  for (const Ball& b : grid) rep.hits.push_back(hitting_set(op, space, x, b, opts.n_max));

  // Per-ball subsequence bound against the scale: the k-th hitting time must
  // stay below L * m_k for some grid L. Witnesses are per ball; the sup over
  // the grid is also reported.
  static const std::vector<double> kLGrid = {1,   2,    4,    8,    16,   32,  64,
                                             128, 256,  512,  1024, 4096, 16384,
                                             65536, 262144, 1048576};
  rep.witnesses.reserve(grid.size());
  for (const HittingSet& hs : rep.hits) {
    ScaleWitnessRow row;
    if (!hs.times.is_empty_within_horizon()) {
      // Hitting times within the orbit horizon only.
      const std::int64_t in_horizon = hs.times.count_leq(hs.times.horizon());
      const MnWitnessResult w = mn_witness(hs.times, m, kLGrid, in_horizon);
      row.found = w.found;
      row.L = w.L;
      row.sup_ratio = w.sup_ratio;
      row.subsequence_head = hs.times.first_elements(16);
      if (w.found)
        rep.witness_sup_L = std::max(rep.witness_sup_L.value_or(0.0), w.L);
    }
    rep.witnesses.push_back(std::move(row));
  }

  for (const FamilySpec& fam : taxonomy) {
    FamilyVerdictRow row;
    row.family = fam.label;
    row.verdict = Verdict::yes;
    for (std::size_t bi = 0; bi < grid.size(); ++bi) {
      const HittingSet& hs = rep.hits[bi];
      Verdict v;
      try {
        EvalOptions o = fit_evaluation_window(opts, fam.kind.weight, hs.times.horizon());
        if (o.n_max < 4) v = Verdict::undetermined;
        else v = is_member(fam, hs.times, o);
      } catch (const Error&) {
        v = Verdict::undetermined;
      }
      if (v == Verdict::no) {
        row.verdict = Verdict::no;
        row.weakest_ball = bi;
        break;
      }
      if (v == Verdict::undetermined && row.verdict == Verdict::yes) {
        row.verdict = Verdict::undetermined;
        row.weakest_ball = bi;
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<Ball> default_ball_grid(int support, const std::vector<double>& radii,
                                    std::size_t max_balls) {
  static const double kCoords[] = {0.0, 1.0, -1.0, 0.5, -0.5};
  std::vector<Vec> centers;
  Vec cur(static_cast<std::size_t>(support), 0.0);
  // Enumerate coordinate tuples in a fixed order, capped at max_balls/|radii|.
  const std::size_t max_centers = std::max<std::size_t>(1, max_balls / std::max<std::size_t>(1, radii.size()));
  std::vector<std::size_t> idx(static_cast<std::size_t>(support), 0);
  for (;;) {
    for (std::size_t j = 0; j < idx.size(); ++j) cur[j] = kCoords[idx[j]];
    centers.push_back(cur);
    if (centers.size() >= max_centers) break;
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == 5) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  std::vector<Ball> grid;
  grid.reserve(centers.size() * radii.size());
  for (const Vec& c : centers)
    for (double r : radii) grid.push_back({c, r});
  return grid;
}

MnWitnessResult mn_witness(const IntegerSet& s, const WeightSequence& m,
                           const std::vector<double>& l_grid, std::int64_t k_max) {
  if (l_grid.empty()) throw Error(Error::Code::invalid_spec, "empty L grid");
  MnWitnessResult out;
  const double max_l = *std::max_element(l_grid.begin(), l_grid.end());

  double sup = 0;
  bool all_exact = true;
  Rational sup_exact(0);
  const std::int64_t total = s.rule() ? k_max
                                      : std::min<std::int64_t>(k_max, s.size_within_horizon());
  // Materialized elements are walked directly; per-element rule lookups only
  // start past the horizon.
  const std::vector<std::int64_t> head = s.first_elements(
      std::min<std::int64_t>({total, s.size_within_horizon(), 2'000'000}));
  for (std::int64_t k = 1; k <= total; ++k) {
    if (k > m.index_limit()) break;
    double ratio;
    bool exact_here = false;
    Rational exact_ratio(0);
    std::optional<std::int64_t> e;
    if (k <= static_cast<std::int64_t>(head.size()))
      e = head[static_cast<std::size_t>(k - 1)];
    else
      e = s.element(k);
    if (e) {
      const double log_n = std::log(static_cast<double>(*e));
      ratio = std::exp(log_n - m.log_at(k));
      if (m.is_integer_valued()) {
        try {
          exact_ratio = Rational(*e) / Rational(m.floor_at(k));
          exact_here = true;
        } catch (const Error&) {
        }
      }
    } else if (s.rule() && !std::isnan(s.rule()->log_element(k))) {
      ratio = std::exp(s.rule()->log_element(k) - m.log_at(k));
    } else {
      break;  // enumeration exhausted
    }
    out.scanned_k = k;
    if (exact_here) {
      if (!all_exact) exact_here = false;
      else if (exact_ratio > sup_exact) sup_exact = exact_ratio;
    } else {
      all_exact = false;
    }
    if (ratio > sup) sup = ratio;
    if (sup > max_l * (1.0 + 1e-9)) {
      out.diverged = true;
      break;
    }
  }
  out.sup_ratio = sup;
  if (all_exact && out.scanned_k > 0) out.sup_ratio_exact = sup_exact;

  if (!out.diverged) {
    std::vector<double> grid(l_grid);
    std::sort(grid.begin(), grid.end());
    for (double l : grid) {
      bool ok;
      if (out.sup_ratio_exact && l == std::floor(l) && l < 9e18) {
        ok = *out.sup_ratio_exact <= Rational(static_cast<std::int64_t>(l));
      } else {
        ok = sup <= l * (1.0 + 1e-9);
      }
      if (ok) {
        out.found = true;
        out.L = l;
        break;
      }
    }
    if (!out.found) out.diverged = true;
  }

  // Cross-check against the lower q-density characterization when m = n^q.
  if (m.kind() == WeightSequence::Kind::power) {
    const std::int64_t avail =
        std::min<std::int64_t>({k_max, 10'000,
                                s.rule() ? k_max : s.size_within_horizon()});
    std::vector<std::int64_t> elems(
        head.begin(),
        head.begin() + std::min<std::size_t>(head.size(), static_cast<std::size_t>(avail)));
    for (std::int64_t k = static_cast<std::int64_t>(elems.size()) + 1; k <= avail; ++k) {
      auto e = s.element(k);
      if (!e) break;
      elems.push_back(*e);
    }
    if (elems.size() >= 4) {
      const LowerQReport rep =
          closed_form_lower_q(elems, m.q(), static_cast<std::int64_t>(elems.size()));
      out.lower_q_consistent = rep.positive == out.found;
    }
  }
  return out;
}

}  // namespace densitylab
