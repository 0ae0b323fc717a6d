#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "densitylab/density.hpp"
#include "densitylab/dynamics.hpp"
#include "densitylab/intset.hpp"
#include "densitylab/weights.hpp"

namespace densitylab {

// Plain nlohmann json keeps object keys sorted, which makes dumps canonical.
using json = nlohmann::json;

// Set specs:
//   {"kind":"intervals","intervals":[[lo,hi],...],"horizon":H}
//   {"kind":"list","elements":[...],"horizon":H}
//   {"kind":"rule","rule":"name:params","horizon":H}
// Rule-backed sets whose rule spec round-trips serialize as rules; derived
// sets (translations, dilations, boolean composites) fall back to intervals.
// Serialization is canonical: parse(to_json(A)) re-serializes byte-identically.
json set_to_json(const IntegerSet& a);
IntegerSet set_from_json(const json& j);

// Weight specs: {"kind":"power","q":"3/2"}, {"kind":"linear","slope":..,
// "offset":..}, {"kind":"table","values":[..]}, {"kind":"expo","base":"e"},
// {"kind":"product","base":..}. Compact strings: "power:3/2", "linear:2+0",
// "table:1,2,3", "expo:e", "product:e", "identity".
json weight_to_json(const WeightSequence& m);
WeightSequence weight_from_json(const json& j);
WeightSequence weight_from_string(const std::string& spec);

// Kind: canonical label plus its parameters resolved from --q / --mn.
DensityKind kind_from_label(const std::string& label, const Rational& q,
                            const WeightSequence& m);

json options_to_json(const EvalOptions& o);
EvalOptions options_from_json(const json& j);

json result_to_json(const DensityResult& r);

// CSV profile rows: kind,s,n,numerator,denominator. Simple kinds leave the
// s column empty; Banach kinds put the witness window position in n.
void write_profile_csv(std::ostream& os, const std::string& kind_label,
                       const std::vector<ProfilePoint>& profile, bool banach);

json classification_to_json(const ClassificationReport& rep);

}  // namespace densitylab
