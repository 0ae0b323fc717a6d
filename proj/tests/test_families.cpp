#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "densitylab/catalogue.hpp"
#include "densitylab/families.hpp"
#include "densitylab/sampling.hpp"

using namespace densitylab;

namespace {

EvalOptions opts() {
  EvalOptions o;
  o.n_max = 50'000;
  o.s_max = 100;
  return o;
}

}  // namespace

TEST_CASE("the taxonomy carries sixteen canonical labels") {
  const auto tax = hypercyclicity_taxonomy(Rational(2), WeightSequence::power(Rational(2)));
  REQUIRE(tax.size() == 16);
  const std::vector<std::string> expected = {
      "frequently-hypercyclic",
      "q-frequently-hypercyclic",
      "upper-frequently-hypercyclic",
      "upper-q-frequently-hypercyclic",
      "l-mn-hypercyclic",
      "u-mn-hypercyclic",
      "lower-reiteratively-hypercyclic",
      "reiteratively-hypercyclic",
      "lower-l-q-reiteratively-hypercyclic",
      "lower-u-q-reiteratively-hypercyclic",
      "upper-l-q-reiteratively-hypercyclic",
      "upper-u-q-reiteratively-hypercyclic",
      "lower-l-mn-reiteratively-hypercyclic",
      "lower-u-mn-reiteratively-hypercyclic",
      "upper-l-mn-reiteratively-hypercyclic",
      "upper-u-mn-reiteratively-hypercyclic",
  };
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(tax[i].label == expected[i]);
}

TEST_CASE("membership verdicts") {
  const IntegerSet evens = generate_set("evens", 200'000);
  const IntegerSet squares = generate_set("squares", 1'000'000);
  const IntegerSet empty = IntegerSet::empty_set(200'000);

  const FamilySpec upper = FamilySpec::positive(DensityKind::upper());
  CHECK(is_member(upper, evens, opts()) == Verdict::yes);

  const FamilySpec lower_q2 = FamilySpec::positive(DensityKind::lower_q(Rational(2)));
  CHECK(is_member(lower_q2, squares, opts()) == Verdict::yes);

  // Properness: the empty set belongs to no positivity family.
  for (const FamilySpec& f : hypercyclicity_taxonomy(Rational(2),
                                                     WeightSequence::power(Rational(2))))
    CHECK(is_member(f, empty, opts()) == Verdict::no);

  // A vanishing density yields "no" only through an exact zero. Pure
  // estimation sees a small positive tail bound and, per the membership
  // rule (yes iff the bracket lower bound is positive), still answers yes:
  // finite evidence cannot distinguish slow decay from a positive limit.
  const FamilySpec lower = FamilySpec::positive(DensityKind::lower());
  EvalOptions est = opts();
  est.use_closed_form = false;
  CHECK(is_member(lower, squares, est) == Verdict::yes);
  CHECK(is_member(lower, squares, opts()) == Verdict::no);

  // Banach-lower kinds reach inner zeros exactly, so the bracket pins at 0
  // and estimation stays undetermined rather than claiming membership.
  const FamilySpec blq =
      FamilySpec::positive(DensityKind::banach_q(Tendency::liminf, Tendency::liminf,
                                                 Rational(2)));
  EvalOptions ban = est;
  ban.s_max = 16;
  ban.n_max = 50'000;
  CHECK(is_member(blq, squares, ban) == Verdict::undetermined);
}

TEST_CASE("family growth criterion") {
  EvalOptions o = opts();
  const FamilyCheckReport p2 = family_check(WeightSequence::power(Rational(2)), o, 1, 20);
  CHECK(p2.furstenberg == Verdict::yes);
  CHECK(p2.criterion_analytic);
  CHECK(p2.naturals_member == Verdict::yes);
  CHECK(p2.naturals_density.value.is_inf());
  CHECK(p2.proper);
  CHECK(p2.upward.passed == p2.upward.applicable);

  const FamilyCheckReport id = family_check(WeightSequence::identity(), o, 1, 20);
  CHECK(id.furstenberg == Verdict::yes);
  CHECK(id.naturals_density.value == ExtRational(Rational(1)));

  const FamilyCheckReport flat =
      family_check(WeightSequence::linear(Rational(0), Rational(5)), o, 1, 20);
  CHECK(flat.furstenberg == Verdict::no);
  CHECK(flat.naturals_member == Verdict::no);

  // ceil(sqrt(s)) as a table: decided numerically at the horizon.
  std::vector<Rational> vals;
  for (std::int64_t s = 1; s <= 4096; ++s) {
    const RootFloor rt = floor_root_pow(s, 1, 2);
    vals.push_back(Rational(std::max<std::int64_t>(1, rt.exact ? rt.value : rt.value + 1)));
  }
  const FamilyCheckReport sqrt_t = family_check(WeightSequence::table(vals), o, 1, 10);
  CHECK(!sqrt_t.criterion_analytic);
  CHECK(sqrt_t.furstenberg == Verdict::no);
}

TEST_CASE("translation stability of membership") {
  EvalOptions o = opts();
  const FamilySpec upper = FamilySpec::positive(DensityKind::upper());
  const TranslateCheckReport evens =
      translate_check(upper, generate_set("evens", 200'000), {7}, o);
  CHECK(evens.original == Verdict::yes);
  CHECK(evens.verdicts_agree);
  CHECK(evens.all_overlap);

  const TranslateCheckReport empty =
      translate_check(upper, IntegerSet::empty_set(200'000), {3, 9}, o);
  CHECK(empty.original == Verdict::no);
  CHECK(empty.verdicts_agree);

  const FamilySpec upper_q2 = FamilySpec::positive(DensityKind::upper_q(Rational(2)));
  const TranslateCheckReport squares =
      translate_check(upper_q2, generate_set("squares", 2'000'000), {100}, o);
  CHECK(squares.original == Verdict::yes);
  CHECK(squares.verdicts_agree);
  CHECK(squares.all_overlap);
}

TEST_CASE("counts are pointwise monotone under inclusion") {
  // This is what makes upward closure of every positivity family assertable:
  // profiles of a subset are dominated pointwise.
  std::mt19937_64 rng(19);
  RandomSetParams params;
  params.horizon = 50'000;
  params.intervals = 40;
  for (int t = 0; t < 200; ++t) {
    auto [a, b] = random_subset_pair(rng, params);
    for (int w = 0; w < 10; ++w) {
      const std::int64_t x = random_in(rng, 1, params.horizon);
      const std::int64_t y = random_in(rng, x, params.horizon);
      CHECK(a.count(x, y) <= b.count(x, y));
    }
  }
}

TEST_CASE("decomposition witnesses") {
  EvalOptions o = opts();
  const DecompositionReport rep = decomposition_witnesses(
      WeightSequence::identity(), generate_set("evens", 200'000), o, 5);
  CHECK(rep.witnessed);
  CHECK(rep.delta >= Rational(1, 4));  // upper density 1/2 clears delta = 1/4
  CHECK(rep.finite_stability_ok);
}
