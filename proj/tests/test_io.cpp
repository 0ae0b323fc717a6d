#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "densitylab/catalogue.hpp"
#include "densitylab/io.hpp"
#include "densitylab/jobs.hpp"

using namespace densitylab;

TEST_CASE("set specs round trip byte-identically") {
  for (const char* spec : {"squares", "kexp", "evens", "multiples:k=3",
                           "sparse-blocks:q=2,eps=1/2,s1=30",
                           "bounded-gap:max=5,seed=1,limit=100000"}) {
    const IntegerSet a = generate_set(spec, 100'000);
    const json j1 = set_to_json(a);
    const IntegerSet b = set_from_json(j1);
    CHECK(set_to_json(b).dump() == j1.dump());
    CHECK(a.intervals() == b.intervals());
    CHECK(a.count_leq(90'000) == b.count_leq(90'000));
  }
  // Derived sets serialize as explicit intervals.
  const IntegerSet t = translate(generate_set("squares", 10'000), 3);
  const json jt = set_to_json(t);
  CHECK(jt["kind"] == "intervals");
  CHECK(set_from_json(jt).intervals() == t.intervals());

  const json list = {{"kind", "list"}, {"elements", {3, 1, 7}}, {"horizon", 50}};
  const IntegerSet l = set_from_json(list);
  CHECK(l.first_elements(3) == std::vector<std::int64_t>{1, 3, 7});

  CHECK_THROWS_AS(set_from_json(json{{"kind", "nope"}}), Error);
}

TEST_CASE("weight specs") {
  for (const char* spec : {"power:2", "power:3/2", "linear:2+0", "linear:1/3+1",
                           "expo:e", "expo:2", "product:e", "table:1,2,3,5"}) {
    const WeightSequence m = weight_from_string(spec);
    const json j = weight_to_json(m);
    const WeightSequence back = weight_from_json(j);
    CHECK(weight_to_json(back).dump() == j.dump());
    CHECK(m.floor_at(3) == back.floor_at(3));
  }
  CHECK(weight_from_string("power:3/2").floor_at(4) == 8);
  CHECK(weight_from_json(json{{"kind", "power"}, {"q", "1.5"}}).floor_at(4) == 8);
  CHECK_THROWS_AS(weight_from_string("bogus:1"), Error);
}

TEST_CASE("kind labels parse back") {
  const Rational q(2);
  const WeightSequence m = WeightSequence::power(Rational(3, 2));
  for (const char* label :
       {"lower", "upper", "lower-q", "upper-q", "lower-mn", "upper-mn", "lower-banach",
        "upper-banach", "lower-l-q-banach", "lower-u-q-banach", "upper-l-q-banach",
        "upper-u-q-banach", "lower-l-mn-banach", "lower-u-mn-banach", "upper-l-mn-banach",
        "upper-u-mn-banach"}) {
    const DensityKind k = kind_from_label(label, q, m);
    CHECK(k.label() == label);
  }
  CHECK_THROWS_AS(kind_from_label("upper-x-q-banach", q, m), Error);
}

TEST_CASE("evaluation options round trip") {
  EvalOptions o;
  o.n_max = 777;
  o.s_max = 55;
  o.outer_step = 3;
  o.inner_mode = InnerMode::full;
  o.use_closed_form = false;
  o.ceil_windows = true;
  o.blow_up_threshold = 17.5;
  o.detect_blow_up = false;
  const EvalOptions back = options_from_json(options_to_json(o));
  CHECK(back.n_max == 777);
  CHECK(back.s_max == 55);
  CHECK(back.outer_step == 3);
  CHECK(back.inner_mode == InnerMode::full);
  CHECK(!back.use_closed_form);
  CHECK(back.ceil_windows);
  CHECK(back.blow_up_threshold == 17.5);
  CHECK(!back.detect_blow_up);
}

TEST_CASE("profile CSV uses integer numerator and denominator columns") {
  std::vector<ProfilePoint> prof = {{1, -1, 0, 1}, {2, -1, 1, 2}, {3, -1, 1, 3}};
  std::ostringstream os;
  write_profile_csv(os, "lower", prof, false);
  CHECK(os.str() == "kind,s,n,numerator,denominator\n"
                    "lower,,1,0,1\n"
                    "lower,,2,1,2\n"
                    "lower,,3,1,3\n");
  std::vector<ProfilePoint> ban = {{4, 17, 2, 4}};
  std::ostringstream os2;
  write_profile_csv(os2, "upper-l-q-banach", ban, true);
  CHECK(os2.str() == "kind,s,n,numerator,denominator\n"
                     "upper-l-q-banach,4,17,2,4\n");
}

TEST_CASE("jobs are reproducible byte for byte") {
  const json job = {{"command", "density"},
                    {"seed", 42},
                    {"set", "squares"},
                    {"kind", "lower-mn"},
                    {"mn", "power:2"},
                    {"options", {{"n_max", 5'000}}}};
  const std::string a = run_job(job).dump();
  const std::string b = run_job(job).dump();
  CHECK(a == b);

  const json fam = {{"command", "family-check"}, {"seed", 7}, {"mn", "power:1"},
                    {"samples", 10},
                    {"options", {{"n_max", 10'000}, {"s_max", 50}}}};
  CHECK(run_job(fam).dump() == run_job(fam).dump());
}

TEST_CASE("job dispatch covers the commands") {
  const json gen = run_job({{"command", "generate"}, {"set", "squares"}, {"horizon", 100}});
  CHECK(gen["output"]["size_within_horizon"] == 10);

  const json wit = run_job({{"command", "witness"},
                            {"set", "evens"},
                            {"mn", "power:1"},
                            {"k_max", 1'000}});
  CHECK(wit["output"]["found"] == true);
  CHECK(wit["output"]["L"] == 2.0);

  const json prof = run_job({{"command", "profile"},
                             {"set", "squares"},
                             {"kind", "lower"},
                             {"options", {{"n_max", 16}}}});
  REQUIRE(prof["output"]["profile"].size() == 16);
  CHECK(prof["output"]["profile"][8]["num"] == 3);  // floor(sqrt(9))

  const json bprof = run_job({{"command", "profile"},
                              {"set", "multiples:k=3"},
                              {"kind", "lower-l-mn-banach"},
                              {"mn", "power:1"},
                              {"horizon", 100'000},
                              {"options", {{"n_max", 10'000}, {"s_max", 9}}}});
  // Windows of 9 consecutive integers always hold exactly 3 multiples of 3.
  for (const auto& row : bprof["output"]["profile"])
    if (row["s"] == 9) {
      CHECK(row["inf_num"] == 3);
      CHECK(row["sup_num"] == 3);
    }

  const json tri = run_job({{"command", "trichotomy"},
                            {"set", "evens"},
                            {"mn", "power:2"},
                            {"options", {{"n_max", 4'096}, {"s_max", 4'096}}}});
  CHECK(tri["output"]["case"] == "ratio-limit-infinite-bounded-gaps");
  CHECK(tri["output"]["consistent"] == true);

  const json cls = run_job(
      {{"command", "classify"},
       {"q", "2"},
       {"mn", "power:2"},
       {"options", {{"n_max", 5'000}, {"s_max", 32}}},
       {"run",
        {{"space", {{"kind", "frechet"}, {"dim", 4}}},
         {"operator",
          {{"kind", "planted-oracle"},
           {"planted", "evens"},
           {"target", {0.0, 0.0, 0.0, 0.0}},
           {"far", {4.0, 0.0, 0.0, 0.0}}}},
         {"vector", {0.0, 0.0, 0.0, 0.0}},
         {"grid", json::array({{{"center", {0.0, 0.0, 0.0, 0.0}}, {"radius", 0.25}}})}}}});
  bool found = false;
  for (const auto& row : cls["output"]["families"])
    if (row["family"] == "frequently-hypercyclic") {
      CHECK(row["verdict"] == "yes");
      found = true;
    }
  CHECK(found);

  CHECK_THROWS_AS(run_job({{"command", "nope"}}), Error);
}

TEST_CASE("environment horizon cap") {
  setenv("DENSITYLAB_MAX_HORIZON", "5000", 1);
  const json gen = run_job({{"command", "generate"}, {"set", "squares"}, {"horizon", 1'000'000}});
  CHECK(gen["output"]["set"]["horizon"] == 5'000);
  unsetenv("DENSITYLAB_MAX_HORIZON");
  const json gen2 = run_job({{"command", "generate"}, {"set", "squares"}, {"horizon", 1'000'000}});
  CHECK(gen2["output"]["set"]["horizon"] == 1'000'000);
}
