#include "densitylab/jobs.hpp"

#include <cstdlib>

#include "densitylab/catalogue.hpp"
#include "densitylab/dynamics.hpp"
#include "densitylab/families.hpp"
#include "densitylab/suites.hpp"

namespace densitylab {

namespace {

std::int64_t env_horizon_cap() {
  if (const char* v = std::getenv("DENSITYLAB_MAX_HORIZON")) {
    try {
      const std::int64_t cap = std::stoll(v);
      if (cap >= 1) return std::min(cap, kCoordCap);
    } catch (const std::exception&) {
      throw Error(Error::Code::invalid_spec, "bad DENSITYLAB_MAX_HORIZON value");
    }
  }
  return kCoordCap;
}

// Default materialization depth for rule-named sets. Exact counting still
// reaches the rule's own limit; this only bounds the stored interval list.
constexpr std::int64_t kDefaultRuleHorizon = 4'000'000;

IntegerSet load_set(const json& job) {
  const std::int64_t cap = env_horizon_cap();
  std::int64_t horizon =
      job.contains("horizon") ? job["horizon"].get<std::int64_t>() : kDefaultRuleHorizon;
  horizon = std::min(horizon, cap);
  if (job.contains("set")) {
    json spec = job["set"];
    if (spec.is_string()) {
      // A bare name is a rule spec.
      return generate_set(spec.get<std::string>(), horizon);
    }
    if (spec.contains("horizon") && spec["horizon"].get<std::int64_t>() > cap)
      spec["horizon"] = cap;
    return set_from_json(spec);
  }
  if (job.contains("rule"))
    return generate_set(job["rule"].get<std::string>(), horizon);
  throw Error(Error::Code::invalid_spec, "job needs a 'set' or 'rule' field");
}

WeightSequence load_weight(const json& job) {
  if (!job.contains("mn")) return WeightSequence::identity();
  const json& m = job["mn"];
  return m.is_string() ? weight_from_string(m.get<std::string>()) : weight_from_json(m);
}

Rational load_q(const json& job) {
  if (!job.contains("q")) return Rational(1);
  const json& q = job["q"];
  return q.is_string() ? parse_rational(q.get<std::string>())
                       : Rational(q.get<std::int64_t>());
}

EvalOptions load_options(const json& job) {
  return job.contains("options") ? options_from_json(job["options"]) : EvalOptions{};
}

int count_undetermined(const json& j) {
  int n = 0;
  if (j.is_string() && j.get<std::string>() == "undetermined") return 1;
  if (j.is_object() || j.is_array())
    for (const auto& item : j) n += count_undetermined(item);
  return n;
}

json check_list(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const CheckResult& c : checks) {
    json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["detail"] = c.detail;
    arr.push_back(std::move(row));
  }
  return arr;
}

json verdict_json(Verdict v) { return to_string(v); }

json run_density(const json& job) {
  const IntegerSet a = load_set(job);
  const WeightSequence m = load_weight(job);
  const Rational q = load_q(job);
  const std::string label =
      job.contains("kind") ? job["kind"].get<std::string>() : "lower";
  const DensityKind kind = kind_from_label(label, q, m);
  json out;
  out["kind"] = label;
  out["result"] = result_to_json(evaluate(a, kind, load_options(job)));
  return out;
}

json run_profile(const json& job) {
  const IntegerSet a = load_set(job);
  const WeightSequence m = load_weight(job);
  const Rational q = load_q(job);
  const std::string label =
      job.contains("kind") ? job["kind"].get<std::string>() : "lower-mn";
  const DensityKind kind = kind_from_label(label, q, m);
  EvalOptions o = load_options(job);
  json out;
  out["kind"] = label;
  json rows = json::array();
  if (!kind.banach) {
    for (const ProfilePoint& p : simple_profile(a, kind.weight, o.n_max, o.ceil_windows)) {
      json row;
      row["n"] = p.outer;
      row["num"] = p.numerator;
      row["den"] = p.denominator;
      rows.push_back(std::move(row));
    }
  } else {
    const std::int64_t n_lo = o.inner_mode == InnerMode::tail
                                  ? std::max<std::int64_t>(1, o.n_max / 2)
                                  : 1;
    for (std::int64_t s = std::max<std::int64_t>(1, o.s_max / 2); s <= o.s_max;
         s += o.outer_step) {
      const BanachWindowStats st =
          banach_profile(a, kind.weight, s, n_lo, o.n_max, o.ceil_windows);
      json row;
      row["s"] = s;
      row["window"] = st.window;
      row["inf_num"] = st.min_count;
      row["inf_den"] = s;
      row["sup_num"] = st.max_count;
      row["sup_den"] = s;
      row["argmin"] = st.argmin_n;
      row["argmax"] = st.argmax_n;
      rows.push_back(std::move(row));
    }
  }
  out["profile"] = std::move(rows);
  return out;
}

json run_chain(const json& job) {
  const IntegerSet a = load_set(job);
  const Rational q = job.contains("q") ? load_q(job) : Rational(2);
  const ChainCheckReport rep = density_chain_check(a, q, load_options(job));
  json out;
  out["ok"] = rep.ok;
  out["violations"] = rep.violations;
  out["banach_lower"] = result_to_json(rep.banach_lower);
  out["lower"] = result_to_json(rep.lower);
  out["upper"] = result_to_json(rep.upper);
  out["banach_upper"] = result_to_json(rep.banach_upper);
  out["lower_q"] = result_to_json(rep.lower_q);
  out["upper_q"] = result_to_json(rep.upper_q);
  out["q"] = q.str();
  return out;
}

json run_trichotomy(const json& job) {
  const IntegerSet a = load_set(job);
  const WeightSequence m = load_weight(job);
  const TrichotomyReport rep = trichotomy_classify(a, m, load_options(job));
  json out;
  out["case"] = to_string(rep.kase);
  out["predicted"] = rep.predicted.str();
  out["prediction_includes_simple"] = rep.prediction_includes_simple;
  out["growth_analytic"] = rep.growth_analytic;
  out["gaps_analytic"] = rep.gaps_analytic;
  out["gaps_bounded"] = rep.gaps_bounded;
  out["consistent"] = rep.consistent;
  out["note"] = rep.note;
  if (rep.kase != TrichotomyCase::inapplicable) {
    out["banach_lower_l"] = result_to_json(rep.banach_lower_l);
    if (rep.kase != TrichotomyCase::ratio_liminf_zero)
      out["banach_lower_u"] = result_to_json(rep.banach_lower_u);
    if (rep.prediction_includes_simple)
      out["simple_lower"] = result_to_json(rep.simple_lower);
  }
  return out;
}

json run_family_check(const json& job, std::uint64_t seed) {
  const WeightSequence m = load_weight(job);
  const int samples = job.contains("samples") ? job["samples"].get<int>() : 100;
  const FamilyCheckReport rep = family_check(m, load_options(job), seed, samples);
  json out;
  out["furstenberg"] = verdict_json(rep.furstenberg);
  out["criterion_analytic"] = rep.criterion_analytic;
  out["limsup_ratio"] = rep.limsup_ratio.str();
  out["naturals_member"] = verdict_json(rep.naturals_member);
  out["naturals_density"] = result_to_json(rep.naturals_density);
  out["proper"] = rep.proper;
  out["upward_attempted"] = rep.upward.attempted;
  out["upward_applicable"] = rep.upward.applicable;
  out["upward_passed"] = rep.upward.passed;
  out["decomposition_ok"] = rep.decomposition_ok;
  out["notes"] = rep.notes;
  return out;
}

json run_generate(const json& job) {
  const IntegerSet a = load_set(job);
  json out;
  out["set"] = set_to_json(a);
  out["size_within_horizon"] = a.size_within_horizon();
  json head = json::array();
  for (std::int64_t e : a.first_elements(32)) head.push_back(e);
  out["first_elements"] = std::move(head);
  json ivs = json::array();
  const std::size_t keep = std::min<std::size_t>(a.intervals().size(), 64);
  for (std::size_t i = 0; i < keep; ++i)
    ivs.push_back(json::array({a.intervals()[i].lo, a.intervals()[i].hi}));
  out["intervals_head"] = std::move(ivs);
  out["interval_count"] = a.intervals().size();
  return out;
}

json run_expected(const json& job, std::uint64_t seed) {
  const std::string rule = job.contains("rule") ? job["rule"].get<std::string>()
                                                : job.at("set").get<std::string>();
  json out;
  out["rule"] = rule;
  out["checks"] = check_list(check_expected(rule, seed));
  return out;
}

json run_classify(const json& job) {
  const json& spec = job.contains("run") ? job["run"] : job;
  // Space.
  SpaceModel space = SpaceModel::frechet(16);
  if (spec.contains("space")) {
    const json& sj = spec["space"];
    const std::string kind = sj.value("kind", "frechet");
    const int dim = sj.value("dim", 16);
    if (kind == "banach-l1") {
      std::vector<double> w;
      if (sj.contains("weights"))
        for (const auto& x : sj["weights"]) w.push_back(x.get<double>());
      space = SpaceModel::banach(dim, std::move(w));
    } else {
      space = SpaceModel::frechet(dim);
    }
  }
  // Operator.
  if (!spec.contains("operator"))
    throw Error(Error::Code::invalid_spec, "classify needs an 'operator'");
  const json& oj = spec["operator"];
  const std::string okind = oj.value("kind", "backward-shift");
  OperatorSpec op;
  if (okind == "backward-shift") {
    std::vector<double> w;
    if (oj.contains("weights") && oj["weights"].is_array())
      for (const auto& x : oj["weights"]) w.push_back(x.get<double>());
    else
      w.assign(static_cast<std::size_t>(space.dim), oj.value("weight", 2.0));
    if (static_cast<int>(w.size()) != space.dim)
      throw Error(Error::Code::invalid_spec, "shift weights must match the dimension");
    op = OperatorSpec::shift(std::move(w));
  } else if (okind == "planted-oracle") {
    IntegerSet planted = oj["planted"].is_string()
                             ? generate_set(oj["planted"].get<std::string>(),
                                            std::min<std::int64_t>(env_horizon_cap(),
                                                                   kDefaultRuleHorizon))
                             : set_from_json(oj["planted"]);
    Vec target, far;
    for (const auto& x : oj.at("target")) target.push_back(x.get<double>());
    for (const auto& x : oj.at("far")) far.push_back(x.get<double>());
    op = OperatorSpec::oracle(std::move(planted), std::move(target), std::move(far));
  } else {
    throw Error(Error::Code::invalid_spec, "unknown operator kind '" + okind + "'");
  }
  // Vector.
  Vec x(static_cast<std::size_t>(space.dim), 0.0);
  if (spec.contains("vector")) {
    x.clear();
    for (const auto& c : spec["vector"]) x.push_back(c.get<double>());
  }
  // Grid.
  std::vector<Ball> grid;
  if (spec.contains("grid") && spec["grid"].is_array()) {
    for (const auto& bj : spec["grid"]) {
      Ball b;
      for (const auto& c : bj.at("center")) b.center.push_back(c.get<double>());
      b.radius = bj.value("radius", 0.25);
      grid.push_back(std::move(b));
    }
  } else {
    int support = 2;
    std::vector<double> radii = {0.25, 0.0625};
    if (spec.contains("grid")) {
      support = spec["grid"].value("support", 2);
      if (spec["grid"].contains("radii")) {
        radii.clear();
        for (const auto& r : spec["grid"]["radii"]) radii.push_back(r.get<double>());
      }
    }
    grid = default_ball_grid(support, radii);
  }
  const ClassificationReport rep = classify(op, space, x, grid, load_q(job),
                                            load_weight(job), load_options(job));
  return classification_to_json(rep);
}

json run_witness(const json& job) {
  const IntegerSet a = load_set(job);
  const WeightSequence m = load_weight(job);
  std::vector<double> grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512,
                              1'000, 10'000, 100'000, 1'000'000};
  if (job.contains("l_grid")) {
    grid.clear();
    for (const auto& l : job["l_grid"]) grid.push_back(l.get<double>());
  }
  const std::int64_t k_max =
      job.contains("k_max") ? job["k_max"].get<std::int64_t>() : 2'000'000;
  const MnWitnessResult w = mn_witness(a, m, grid, k_max);
  json out;
  out["found"] = w.found;
  if (w.found) out["L"] = w.L;
  out["sup_ratio"] = w.sup_ratio;
  if (w.sup_ratio_exact) out["sup_ratio_exact"] = w.sup_ratio_exact->str();
  out["scanned_k"] = w.scanned_k;
  out["diverged"] = w.diverged;
  if (w.lower_q_consistent) out["lower_q_consistent"] = *w.lower_q_consistent;

  // Companion density bracket, matching the witness's weight.
  try {
    EvalOptions o = load_options(job);
    o.n_max = std::min<std::int64_t>(o.n_max, 40);
    o.detect_blow_up = false;
    const DensityResult r = evaluate(a, DensityKind::lower_mn(m), o);
    out["lower_mn_density"] = result_to_json(r);
  } catch (const Error&) {
  }
  return out;
}

json run_suite_cmd(const json& job, std::uint64_t seed) {
  const std::string name = job.at("name").get<std::string>();
  const bool quick = job.value("quick", false);
  const SuiteReport rep = run_suite(name, seed, quick);
  json out;
  out["suite"] = rep.suite;
  out["all_pass"] = rep.all_pass();
  out["checks"] = check_list(rep.checks);
  return out;
}

}  // namespace

json run_job(const json& job) {
  const std::string command = job.at("command").get<std::string>();
  const std::uint64_t seed = job.value("seed", std::uint64_t{0});
  json out;
  out["command"] = command;
  out["seed"] = seed;
  out["job"] = job;

  json result;
  if (command == "density") result = run_density(job);
  else if (command == "profile") result = run_profile(job);
  else if (command == "chain-check") result = run_chain(job);
  else if (command == "trichotomy") result = run_trichotomy(job);
  else if (command == "family-check") result = run_family_check(job, seed);
  else if (command == "generate") result = run_generate(job);
  else if (command == "expected-check") result = run_expected(job, seed);
  else if (command == "classify") result = run_classify(job);
  else if (command == "witness") result = run_witness(job);
  else if (command == "suite") result = run_suite_cmd(job, seed);
  else
    throw Error(Error::Code::invalid_spec, "unknown command '" + command + "'");

  out["output"] = std::move(result);
  out["undetermined_verdicts"] = count_undetermined(out["output"]);
  bool failed = false;
  if (out["output"].contains("ok")) failed = !out["output"]["ok"].get<bool>();
  if (out["output"].contains("all_pass")) failed = !out["output"]["all_pass"].get<bool>();
  out["failed_checks"] = failed;
  return out;
}

}  // namespace densitylab
