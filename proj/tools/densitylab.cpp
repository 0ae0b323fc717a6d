// densitylab: exact counting and density estimation for subsets of the
// positive integers, with the sliding-window (Banach) variants, family
// checks, a catalogue of generator rules, and weighted-shift orbit runs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "densitylab/catalogue.hpp"
#include "densitylab/jobs.hpp"
#include "densitylab/suites.hpp"

using densitylab::json;

namespace {

struct CommonFlags {
  std::string set;
  std::string set_rule;
  std::string kind;
  std::string mn;
  std::string q;
  std::int64_t nmax = 0;
  std::int64_t smax = 0;
  std::int64_t horizon = 0;
  std::string inner_mode;
  bool no_closed_form = false;
  bool strict = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_set = true) {
  if (with_set) {
    cmd->add_option("--set", f.set, "set spec: JSON file, inline JSON, or rule name");
    cmd->add_option("--set-rule", f.set_rule, "generator rule spec (name:key=value,...)");
    cmd->add_option("--horizon", f.horizon, "materialization horizon");
  }
  cmd->add_option("--kind", f.kind, "density kind label (e.g. lower-mn, upper-l-q-banach)");
  cmd->add_option("--mn", f.mn, "weight spec (power:2, linear:2+0, expo:e, table:...)");
  cmd->add_option("--q", f.q, "exponent q as rational or decimal");
  cmd->add_option("--nmax", f.nmax, "inner horizon N_max");
  cmd->add_option("--smax", f.smax, "outer horizon S_max");
  cmd->add_option("--inner-mode", f.inner_mode, "inner range: tail (default) or full")
      ->check(CLI::IsMember({"tail", "full", ""}));
  cmd->add_flag("--no-closed-form", f.no_closed_form, "force the estimation path");
  cmd->add_flag("--strict", f.strict, "exit 2 on undetermined verdicts");
  cmd->add_option("--seed", f.seed, "random seed recorded in the output header");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--format", f.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

json set_field(const CommonFlags& f) {
  if (!f.set_rule.empty()) return f.set_rule;
  if (f.set.empty()) throw densitylab::Error(densitylab::Error::Code::invalid_spec,
                                             "missing --set or --set-rule");
  // Inline JSON, a JSON file, or a bare rule name.
  if (!f.set.empty() && (f.set.front() == '{' || f.set.front() == '[')) {
    return json::parse(f.set);
  }
  std::ifstream in(f.set);
  if (in.good()) {
    json j;
    in >> j;
    return j;
  }
  return f.set;  // rule name
}

json build_job(const std::string& command, const CommonFlags& f, bool with_set = true) {
  json job;
  job["command"] = command;
  job["seed"] = f.seed;
  if (with_set) job["set"] = set_field(f);
  if (!f.kind.empty()) job["kind"] = f.kind;
  if (!f.mn.empty()) job["mn"] = f.mn;
  if (!f.q.empty()) job["q"] = f.q;
  if (f.horizon > 0) job["horizon"] = f.horizon;
  json opts;
  if (f.nmax > 0) opts["n_max"] = f.nmax;
  if (f.smax > 0) opts["s_max"] = f.smax;
  if (!f.inner_mode.empty()) opts["inner_mode"] = f.inner_mode;
  if (f.no_closed_form) opts["use_closed_form"] = false;
  if (!opts.empty()) job["options"] = opts;
  return job;
}

void emit(const json& doc, const CommonFlags& f) {
  std::string text;
  if (f.format == "csv" && doc["output"].contains("profile")) {
    std::ostringstream os;
    const std::string kind = doc["output"].value("kind", "");
    const json& prof = doc["output"]["profile"];
    if (!prof.empty() && prof.front().contains("s")) {
      os << "kind,s,n,numerator,denominator\n";
      for (const auto& row : prof) {
        os << kind << ',' << row["s"].get<std::int64_t>() << ','
           << row["argmin"].get<std::int64_t>() << ',' << row["inf_num"].get<std::int64_t>()
           << ',' << row["inf_den"].get<std::int64_t>() << '\n';
        os << kind << ',' << row["s"].get<std::int64_t>() << ','
           << row["argmax"].get<std::int64_t>() << ',' << row["sup_num"].get<std::int64_t>()
           << ',' << row["sup_den"].get<std::int64_t>() << '\n';
      }
    } else {
      os << "kind,s,n,numerator,denominator\n";
      for (const auto& row : prof)
        os << kind << ",," << row["n"].get<std::int64_t>() << ','
           << row["num"].get<std::int64_t>() << ',' << row["den"].get<std::int64_t>() << '\n';
    }
    text = os.str();
  } else {
    text = doc.dump(2) + "\n";
  }
  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(f.out);
    os << text;
  }
}

void summarize(const json& doc) {
  const json& out = doc["output"];
  if (out.contains("result")) {
    const json& r = out["result"];
    std::cerr << "value " << r["value"].get<std::string>() << " bracket ["
              << r["lower_bound"].get<std::string>() << ", "
              << r["upper_bound"].get<std::string>() << "]"
              << (r["exact"].get<bool>() ? " exact" : "") << " via "
              << r["method"].get<std::string>() << "\n";
  }
  if (out.contains("checks")) {
    int pass = 0, fail = 0;
    for (const auto& c : out["checks"]) {
      (c["pass"].get<bool>() ? pass : fail)++;
      std::cerr << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
                << c["name"].get<std::string>();
      const std::string detail = c.value("detail", "");
      if (!detail.empty()) std::cerr << " -- " << detail;
      std::cerr << "\n";
    }
    std::cerr << pass << " passed, " << fail << " failed\n";
  }
  if (doc["undetermined_verdicts"].get<int>() > 0)
    std::cerr << doc["undetermined_verdicts"].get<int>() << " undetermined verdict(s)\n";
}

int run(const std::string& command, const CommonFlags& f, json job) {
  (void)command;
  const json doc = densitylab::run_job(job);
  emit(doc, f);
  summarize(doc);
  if (doc["failed_checks"].get<bool>()) return 1;
  if (f.strict && doc["undetermined_verdicts"].get<int>() > 0) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densitylab: densities of integer sets and shift-orbit classification"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string suite_name, spec_file;
  bool quick = false;
  std::int64_t kmax = 0;
  double lmax = 0;

  CLI::App* density = app.add_subcommand("density", "evaluate one density functional");
  add_common(density, f);
  CLI::App* profile = app.add_subcommand("profile", "export the exact ratio profile");
  add_common(profile, f);
  CLI::App* chain = app.add_subcommand("chain-check", "verify the density chain");
  add_common(chain, f);
  CLI::App* tricho = app.add_subcommand("trichotomy", "growth classification of the lower pair");
  add_common(tricho, f);
  CLI::App* family = app.add_subcommand("family-check", "Furstenberg checks for a weight");
  add_common(family, f, false);
  CLI::App* generate = app.add_subcommand("generate", "materialize a catalogued rule");
  add_common(generate, f);
  CLI::App* expected = app.add_subcommand("expected-check", "verify catalogued verdicts");
  add_common(expected, f);
  CLI::App* classify_cmd = app.add_subcommand("classify", "orbit classification run");
  classify_cmd->add_option("--spec", spec_file, "run spec JSON file")->required();
  add_common(classify_cmd, f, false);
  CLI::App* witness = app.add_subcommand("witness", "search for a subsequence bound L");
  add_common(witness, f);
  witness->add_option("--kmax", kmax, "elements to scan");
  witness->add_option("--lmax", lmax, "largest L in the default grid");
  CLI::App* suite = app.add_subcommand("suite", "run a named check bundle");
  suite->add_option("name", suite_name, "invariants | paper-values | oracle | acceptance")
      ->required();
  suite->add_flag("--quick", quick, "reduced sample sizes");
  add_common(suite, f, false);
  CLI::App* rules = app.add_subcommand("rules", "list the generator rule catalogue");

  CLI11_PARSE(app, argc, argv);

  try {
    if (density->parsed()) return run("density", f, build_job("density", f));
    if (profile->parsed()) return run("profile", f, build_job("profile", f));
    if (chain->parsed()) return run("chain-check", f, build_job("chain-check", f));
    if (tricho->parsed()) return run("trichotomy", f, build_job("trichotomy", f));
    if (family->parsed()) return run("family-check", f, build_job("family-check", f, false));
    if (generate->parsed()) return run("generate", f, build_job("generate", f));
    if (expected->parsed()) return run("expected-check", f, build_job("expected-check", f));
    if (witness->parsed()) {
      json job = build_job("witness", f);
      if (kmax > 0) job["k_max"] = kmax;
      if (lmax > 0) {
        json grid = json::array();
        for (double l = 1; l <= lmax; l *= 10) grid.push_back(l);
        job["l_grid"] = grid;
      }
      return run("witness", f, job);
    }
    if (classify_cmd->parsed()) {
      std::ifstream in(spec_file);
      if (!in.good())
        throw densitylab::Error(densitylab::Error::Code::invalid_spec,
                                "cannot open run spec '" + spec_file + "'");
      json spec;
      in >> spec;
      json job = build_job("classify", f, false);
      job["run"] = spec;
      return run("classify", f, job);
    }
    if (suite->parsed()) {
      json job = build_job("suite", f, false);
      job["name"] = suite_name;
      job["quick"] = quick;
      return run("suite", f, job);
    }
    if (rules->parsed()) {
      for (const auto& r : densitylab::rule_catalogue())
        std::cout << r.name << (r.params_doc.empty() ? "" : ":" + r.params_doc) << "\n    "
                  << r.summary << "\n";
      return 0;
    }
  } catch (const densitylab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
