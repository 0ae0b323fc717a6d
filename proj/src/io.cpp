#include "densitylab/io.hpp"

#include <ostream>
#include <sstream>

#include "densitylab/catalogue.hpp"

namespace densitylab {

namespace {

json ext_to_json(const ExtRational& v) { return v.str(); }

json intervals_to_json(const std::vector<Interval>& ivs) {
  json arr = json::array();
  for (const Interval& iv : ivs) arr.push_back(json::array({iv.lo, iv.hi}));
  return arr;
}

std::vector<Interval> intervals_from_json(const json& arr) {
  std::vector<Interval> out;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2)
      throw Error(Error::Code::invalid_spec, "interval must be [lo, hi]");
    out.push_back({item[0].get<std::int64_t>(), item[1].get<std::int64_t>()});
  }
  return out;
}

}  // namespace

json set_to_json(const IntegerSet& a) {
  json j;
  if (const SetRule* rule = a.rule()) {
    const std::string spec = rule_spec(*rule);
    bool reconstructs = false;
    try {
      reconstructs = make_rule(spec) != nullptr;
    } catch (const Error&) {
      reconstructs = false;
    }
    if (reconstructs) {
      j["kind"] = "rule";
      j["rule"] = spec;
      j["horizon"] = a.horizon();
      return j;
    }
  }
  j["kind"] = "intervals";
  j["intervals"] = intervals_to_json(a.intervals());
  j["horizon"] = a.horizon();
  return j;
}

IntegerSet set_from_json(const json& j) {
  if (!j.contains("kind"))
    throw Error(Error::Code::invalid_spec, "set spec missing 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  const std::int64_t horizon =
      j.contains("horizon") ? j["horizon"].get<std::int64_t>() : kDefaultHorizon;
  if (kind == "intervals")
    return IntegerSet::from_intervals(intervals_from_json(j.at("intervals")), horizon);
  if (kind == "list") {
    std::vector<std::int64_t> elems;
    for (const auto& e : j.at("elements")) elems.push_back(e.get<std::int64_t>());
    return IntegerSet::from_elements(elems, horizon);
  }
  if (kind == "rule")
    return IntegerSet::from_rule(make_rule(j.at("rule").get<std::string>()), horizon);
  throw Error(Error::Code::invalid_spec, "unknown set kind '" + kind + "'");
}

json weight_to_json(const WeightSequence& m) {
  json j;
  switch (m.kind()) {
    case WeightSequence::Kind::power:
      j["kind"] = "power";
      j["q"] = m.q().str();
      break;
    case WeightSequence::Kind::linear:
      j["kind"] = "linear";
      j["slope"] = m.slope().str();
      j["offset"] = m.offset().str();
      break;
    case WeightSequence::Kind::table: {
      j["kind"] = "table";
      json arr = json::array();
      for (const Rational& v : m.table_values()) arr.push_back(v.str());
      j["values"] = arr;
      break;
    }
    case WeightSequence::Kind::expo:
      j["kind"] = "expo";
      j["base"] = m.base().str();
      break;
    case WeightSequence::Kind::product:
      j["kind"] = "product";
      j["base"] = m.base().str();
      break;
  }
  return j;
}

namespace {

WeightBase base_from_string(const std::string& s) {
  if (s == "e") return WeightBase::e();
  return WeightBase::rational(parse_rational(s));
}

}  // namespace

WeightSequence weight_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") return WeightSequence::power(parse_rational(j.at("q").get<std::string>()));
  if (kind == "linear")
    return WeightSequence::linear(parse_rational(j.at("slope").get<std::string>()),
                                  parse_rational(j.at("offset").get<std::string>()));
  if (kind == "table") {
    std::vector<Rational> vals;
    for (const auto& v : j.at("values"))
      vals.push_back(v.is_string() ? parse_rational(v.get<std::string>())
                                   : Rational(v.get<std::int64_t>()));
    return WeightSequence::table(std::move(vals));
  }
  if (kind == "expo") return WeightSequence::expo(base_from_string(j.at("base").get<std::string>()));
  if (kind == "product")
    return WeightSequence::product(base_from_string(j.at("base").get<std::string>()));
  throw Error(Error::Code::invalid_spec, "unknown weight kind '" + kind + "'");
}

WeightSequence weight_from_string(const std::string& spec) {
  if (spec == "identity" || spec.empty()) return WeightSequence::identity();
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "power") return WeightSequence::power(parse_rational(rest));
  if (kind == "expo") return WeightSequence::expo(base_from_string(rest));
  if (kind == "product") return WeightSequence::product(base_from_string(rest));
  if (kind == "linear") {
    const auto plus = rest.find('+');
    if (plus == std::string::npos)
      return WeightSequence::linear(parse_rational(rest), Rational(0));
    return WeightSequence::linear(parse_rational(rest.substr(0, plus)),
                                  parse_rational(rest.substr(plus + 1)));
  }
  if (kind == "table") {
    std::vector<Rational> vals;
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      vals.push_back(parse_rational(rest.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return WeightSequence::table(std::move(vals));
  }
  throw Error(Error::Code::invalid_spec, "unknown weight spec '" + spec + "'");
}

DensityKind kind_from_label(const std::string& label, const Rational& q,
                            const WeightSequence& m) {
  if (label == "lower") return DensityKind::lower();
  if (label == "upper") return DensityKind::upper();
  if (label == "lower-q") return DensityKind::lower_q(q);
  if (label == "upper-q") return DensityKind::upper_q(q);
  if (label == "lower-mn") return DensityKind::lower_mn(m);
  if (label == "upper-mn") return DensityKind::upper_mn(m);
  if (label == "lower-banach") return DensityKind::lower_banach();
  if (label == "upper-banach") return DensityKind::upper_banach();
  // "<inner>-<outer>-<flavor>-banach"
  const auto parse_banach = [&](const std::string& s) -> std::optional<DensityKind> {
    const auto p1 = s.find('-');
    if (p1 == std::string::npos) return std::nullopt;
    const auto p2 = s.find('-', p1 + 1);
    if (p2 == std::string::npos) return std::nullopt;
    const auto p3 = s.find('-', p2 + 1);
    if (p3 == std::string::npos || s.substr(p3 + 1) != "banach") return std::nullopt;
    const std::string in = s.substr(0, p1);
    const std::string out = s.substr(p1 + 1, p2 - p1 - 1);
    const std::string fl = s.substr(p2 + 1, p3 - p2 - 1);
    if ((in != "lower" && in != "upper") || (out != "l" && out != "u") ||
        (fl != "q" && fl != "mn"))
      return std::nullopt;
    const Tendency inner = in == "lower" ? Tendency::liminf : Tendency::limsup;
    const Tendency outer = out == "l" ? Tendency::liminf : Tendency::limsup;
    return fl == "q" ? DensityKind::banach_q(inner, outer, q)
                     : DensityKind::banach_mn(inner, outer, m);
  };
  if (auto k = parse_banach(label)) return *k;
  throw Error(Error::Code::invalid_spec, "unknown density kind '" + label + "'");
}

json options_to_json(const EvalOptions& o) {
  json j;
  j["n_max"] = o.n_max;
  j["s_max"] = o.s_max;
  j["outer_step"] = o.outer_step;
  j["inner_mode"] = o.inner_mode == InnerMode::tail ? "tail" : "full";
  j["use_closed_form"] = o.use_closed_form;
  j["ceil_windows"] = o.ceil_windows;
  j["blow_up_threshold"] = o.blow_up_threshold;
  j["blow_up_doublings"] = o.blow_up_doublings;
  j["detect_blow_up"] = o.detect_blow_up;
  return j;
}

EvalOptions options_from_json(const json& j) {
  EvalOptions o;
  if (j.contains("n_max")) o.n_max = j["n_max"].get<std::int64_t>();
  if (j.contains("s_max")) o.s_max = j["s_max"].get<std::int64_t>();
  if (j.contains("outer_step")) o.outer_step = j["outer_step"].get<std::int64_t>();
  if (j.contains("inner_mode"))
    o.inner_mode = j["inner_mode"].get<std::string>() == "full" ? InnerMode::full
                                                                : InnerMode::tail;
  if (j.contains("use_closed_form")) o.use_closed_form = j["use_closed_form"].get<bool>();
  if (j.contains("ceil_windows")) o.ceil_windows = j["ceil_windows"].get<bool>();
  if (j.contains("blow_up_threshold"))
    o.blow_up_threshold = j["blow_up_threshold"].get<double>();
  if (j.contains("blow_up_doublings"))
    o.blow_up_doublings = j["blow_up_doublings"].get<int>();
  if (j.contains("detect_blow_up")) o.detect_blow_up = j["detect_blow_up"].get<bool>();
  return o;
}

json result_to_json(const DensityResult& r) {
  json j;
  j["value"] = ext_to_json(r.value);
  j["exact"] = r.exact;
  j["lower_bound"] = ext_to_json(r.lower_bound);
  j["upper_bound"] = ext_to_json(r.upper_bound);
  j["n_max"] = r.n_max;
  j["s_max"] = r.s_max;
  j["blow_up"] = r.blow_up;
  j["method"] = r.method;
  json prof = json::array();
  for (const ProfilePoint& p : r.profile) {
    json row;
    row["outer"] = p.outer;
    if (p.inner >= 0) row["inner"] = p.inner;
    row["num"] = p.numerator;
    row["den"] = p.denominator;
    prof.push_back(std::move(row));
  }
  j["profile"] = std::move(prof);
  return j;
}

void write_profile_csv(std::ostream& os, const std::string& kind_label,
                       const std::vector<ProfilePoint>& profile, bool banach) {
  os << "kind,s,n,numerator,denominator\n";
  for (const ProfilePoint& p : profile) {
    os << kind_label << ',';
    if (banach)
      os << p.outer << ',' << (p.inner >= 0 ? std::to_string(p.inner) : std::string());
    else
      os << ',' << p.outer;
    os << ',' << p.numerator << ',' << p.denominator << '\n';
  }
}

json classification_to_json(const ClassificationReport& rep) {
  json j;
  j["n_max"] = rep.n_max;
  json rows = json::array();
  for (const FamilyVerdictRow& r : rep.rows) {
    json row;
    row["family"] = r.family;
    row["verdict"] = to_string(r.verdict);
    row["weakest_ball"] = r.weakest_ball;
    rows.push_back(std::move(row));
  }
  j["families"] = std::move(rows);
  json hits = json::array();
  for (const HittingSet& h : rep.hits) {
    json hj;
    hj["n_max"] = h.n_max;
    hj["boundary_ambiguous"] = h.boundary_ambiguous;
    hj["orbit_overflow"] = h.orbit_overflow;
    hj["times"] = intervals_to_json(h.times.intervals());
    hits.push_back(std::move(hj));
  }
  j["hitting_sets"] = std::move(hits);
  json wits = json::array();
  for (const ScaleWitnessRow& w : rep.witnesses) {
    json wj;
    wj["found"] = w.found;
    if (w.found) wj["L"] = w.L;
    wj["sup_ratio"] = w.sup_ratio;
    wj["subsequence_head"] = w.subsequence_head;
    wits.push_back(std::move(wj));
  }
  j["scale_witnesses"] = std::move(wits);
  if (rep.witness_sup_L) j["witness_sup_L"] = *rep.witness_sup_L;
  return j;
}

}  // namespace densitylab
