#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "densitylab/catalogue.hpp"
#include "densitylab/dynamics.hpp"
#include "densitylab/families.hpp"
#include "densitylab/io.hpp"
#include "densitylab/jobs.hpp"
#include "densitylab/suites.hpp"

namespace py = pybind11;
using namespace densitylab;

namespace {

std::string evaluate_json(const IntegerSet& a, const std::string& kind_label,
                          const std::string& q, const std::string& mn,
                          const std::string& options_json) {
  const Rational qr = q.empty() ? Rational(1) : parse_rational(q);
  const WeightSequence m =
      mn.empty() ? WeightSequence::identity() : weight_from_string(mn);
  const DensityKind kind = kind_from_label(kind_label, qr, m);
  EvalOptions opts;
  if (!options_json.empty()) opts = options_from_json(json::parse(options_json));
  json out;
  out["kind"] = kind_label;
  out["result"] = result_to_json(evaluate(a, kind, opts));
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_densitylab, mod) {
  mod.doc() = "exact counting and asymptotic densities of integer sets";

  py::register_exception<Error>(mod, "DensityLabError");

  py::class_<IntegerSet>(mod, "IntegerSet")
      .def_static("from_json",
                  [](const std::string& s) { return set_from_json(json::parse(s)); })
      .def_static("from_rule",
                  [](const std::string& spec, std::int64_t horizon) {
                    return generate_set(spec, horizon);
                  },
                  py::arg("spec"), py::arg("horizon") = std::int64_t{4'000'000})
      .def_static("from_intervals",
                  [](const std::vector<std::pair<std::int64_t, std::int64_t>>& ivs,
                     std::int64_t horizon) {
                    std::vector<Interval> v;
                    for (auto [lo, hi] : ivs) v.push_back({lo, hi});
                    return IntegerSet::from_intervals(std::move(v), horizon);
                  },
                  py::arg("intervals"), py::arg("horizon") = kDefaultHorizon)
      .def_static("from_elements",
                  [](const std::vector<std::int64_t>& es, std::int64_t horizon) {
                    return IntegerSet::from_elements(es, horizon);
                  },
                  py::arg("elements"), py::arg("horizon") = kDefaultHorizon)
      .def_static("naturals", &IntegerSet::naturals, py::arg("horizon") = kDefaultHorizon)
      .def_static("empty", &IntegerSet::empty_set, py::arg("horizon") = kDefaultHorizon)
      .def("count", &IntegerSet::count, py::arg("a"), py::arg("b"))
      .def("count_leq", &IntegerSet::count_leq)
      .def("contains", &IntegerSet::contains)
      .def("horizon", &IntegerSet::horizon)
      .def("count_limit", &IntegerSet::count_limit)
      .def("size_within_horizon", &IntegerSet::size_within_horizon)
      .def("first_elements", &IntegerSet::first_elements)
      .def("with_horizon", &IntegerSet::with_horizon)
      .def("intervals",
           [](const IntegerSet& a) {
             std::vector<std::pair<std::int64_t, std::int64_t>> out;
             for (const Interval& iv : a.intervals()) out.emplace_back(iv.lo, iv.hi);
             return out;
           })
      .def("translate", [](const IntegerSet& a, std::int64_t k) { return translate(a, k); })
      .def("dilate", [](const IntegerSet& a, std::int64_t k) { return dilate(a, k); })
      .def("union_with",
           [](const IntegerSet& a, const IntegerSet& b) {
             return boolean_op(a, b, SetOp::unite);
           })
      .def("intersect",
           [](const IntegerSet& a, const IntegerSet& b) {
             return boolean_op(a, b, SetOp::intersect);
           })
      .def("difference",
           [](const IntegerSet& a, const IntegerSet& b) {
             return boolean_op(a, b, SetOp::subtract);
           })
      .def("symmetric_difference",
           [](const IntegerSet& a, const IntegerSet& b) {
             return boolean_op(a, b, SetOp::sym_diff);
           })
      .def("complement", [](const IntegerSet& a) { return complement(a); })
      .def("to_json", [](const IntegerSet& a) { return set_to_json(a).dump(); })
      .def("__repr__", [](const IntegerSet& a) {
        return "<IntegerSet horizon=" + std::to_string(a.horizon()) + " size=" +
               std::to_string(a.size_within_horizon()) + ">";
      });

  py::class_<WeightSequence>(mod, "WeightSequence")
      .def_static("from_spec", &weight_from_string)
      .def_static("from_json",
                  [](const std::string& s) { return weight_from_json(json::parse(s)); })
      .def("floor_at", &WeightSequence::floor_at)
      .def("ceil_at", &WeightSequence::ceil_at)
      .def("approx_at", &WeightSequence::approx_at)
      .def("describe", &WeightSequence::describe)
      .def("__repr__",
           [](const WeightSequence& m) { return "<WeightSequence " + m.describe() + ">"; });

  mod.def("evaluate_density", &evaluate_json, py::arg("set"), py::arg("kind"),
          py::arg("q") = "", py::arg("mn") = "", py::arg("options") = "",
          "evaluate one density functional; returns a JSON string");

  mod.def("simple_profile",
          [](const IntegerSet& a, const std::string& mn, std::int64_t n) {
            std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> out;
            for (const ProfilePoint& p :
                 simple_profile(a, weight_from_string(mn), n))
              out.emplace_back(p.outer, p.numerator, p.denominator);
            return out;
          },
          py::arg("set"), py::arg("mn"), py::arg("n"),
          "exact ratios (n, count, denominator) for n = 1..N");

  mod.def("mn_witness",
          [](const IntegerSet& s, const std::string& mn, const std::vector<double>& grid,
             std::int64_t k_max) {
            const MnWitnessResult w = mn_witness(s, weight_from_string(mn), grid, k_max);
            json out;
            out["found"] = w.found;
            if (w.found) out["L"] = w.L;
            out["sup_ratio"] = w.sup_ratio;
            out["scanned_k"] = w.scanned_k;
            out["diverged"] = w.diverged;
            return out.dump();
          },
          py::arg("set"), py::arg("mn"), py::arg("l_grid"), py::arg("k_max") = 1'000'000);

  mod.def("run_job",
          [](const std::string& job) { return run_job(json::parse(job)).dump(); },
          "run one batch job from a JSON spec; returns the output document");

  mod.def("run_suite",
          [](const std::string& name, std::uint64_t seed, bool quick) {
            const SuiteReport rep = run_suite(name, seed, quick);
            json out;
            out["suite"] = rep.suite;
            out["all_pass"] = rep.all_pass();
            json checks = json::array();
            for (const CheckResult& c : rep.checks) {
              json row;
              row["name"] = c.name;
              row["pass"] = c.pass;
              row["detail"] = c.detail;
              checks.push_back(std::move(row));
            }
            out["checks"] = std::move(checks);
            return out.dump();
          },
          py::arg("name"), py::arg("seed") = 0, py::arg("quick") = false);

  mod.def("rule_catalogue", [] {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const RuleInfo& r : rule_catalogue())
      out.emplace_back(r.name, r.params_doc, r.summary);
    return out;
  });

  mod.attr("__version__") = "0.1.0";
}
