#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "densitylab/catalogue.hpp"
#include "densitylab/weights.hpp"

using namespace densitylab;

TEST_CASE("squares rule") {
  const IntegerSet s = generate_set("squares", 100);
  CHECK(s.size_within_horizon() == 10);
  CHECK(s.contains(1));
  CHECK(s.contains(49));
  CHECK(s.contains(100));
  CHECK(!s.contains(50));
  CHECK(s.count_leq(1'000'000'000'000LL) == 1'000'000);  // exact far past the horizon
}

TEST_CASE("power enumeration rule") {
  const IntegerSet s = generate_set("power:coeff=2,exponent=2", 1'000);
  CHECK(s.first_elements(4) == std::vector<std::int64_t>{2, 8, 18, 32});
  const IntegerSet f = generate_set("power:coeff=3/2,exponent=3/2", 1'000);
  // floor(1.5 * k^1.5): k=1 -> 1, k=2 -> 4, k=3 -> 7, k=4 -> 12
  CHECK(f.first_elements(4) == std::vector<std::int64_t>{1, 4, 7, 12});
  CHECK_THROWS_AS(make_rule("power:coeff=0,exponent=2"), Error);
}

TEST_CASE("kexp rule: floor of k e^k") {
  const IntegerSet s = generate_set("kexp", 1'000'000);
  CHECK(s.first_elements(5) == std::vector<std::int64_t>{2, 14, 60, 218, 742});
  CHECK(s.size_within_horizon() == 11);  // 11 e^11 = 658'613.9; 12 e^12 > 1e6
  // Counting reaches e^40 exactly.
  const std::int64_t e40 = WeightSequence::expo(WeightBase::e()).floor_at(40);
  CHECK(s.count_leq(e40) == 36);
}

TEST_CASE("blocks rules") {
  const IntegerSet b1 = generate_set("blocks:a=4,b=n", 10'000);
  REQUIRE(b1.intervals().size() >= 3);
  CHECK(b1.intervals()[0] == Interval{1, 2});
  CHECK(b1.intervals()[1] == Interval{16, 18});
  CHECK(b1.intervals()[2] == Interval{81, 84});

  const IntegerSet b2 = generate_set("blocks:a=3/2,b=one", 100);
  // First disjoint block index is 2: floor(2^1.5)=2 -> [2,3], then [5,6], [8,9]...
  CHECK(b2.intervals()[0] == Interval{2, 3});
  CHECK(b2.intervals()[1] == Interval{5, 6});
  CHECK(b2.contains(8));
  CHECK_THROWS_AS(make_rule("blocks:a=1,b=n"), Error);
}

TEST_CASE("sparse blocks schedule and counts") {
  const auto levels = sparse_blocks_schedule(Rational(2), Rational(1, 2), 30);
  REQUIRE(levels.size() >= 4);
  CHECK(levels[0].s_prime == 30);
  CHECK(levels[1].s_prime == 931);
  CHECK(levels[2].s_prime == 867'693);
  CHECK(levels[2].s == 9);
  CHECK(levels[2].per_cell == 3);
  CHECK(levels[2].cell_width == 81);

  const IntegerSet a = generate_set("sparse-blocks:q=2,eps=1/2,s1=30", 2'000'000);
  // No content outside the blocks.
  CHECK(a.count(1, 30) == 0);
  CHECK(a.count(931, 931) == 0);
  // Cell count constraints: each full cell holds per_cell points, and a
  // closed window of one cell width holds at most per_cell + 1.
  const SparseBlocksLevel& L = levels[2];
  for (std::int64_t j = 0; j < 50; ++j) {
    const std::int64_t lo = L.s_prime + 1 + j * L.cell_width;
    const std::int64_t cnt = a.count(lo, lo + L.cell_width - 1);
    CHECK(cnt == L.per_cell);
    CHECK(a.count(lo, lo + L.cell_width) <= L.per_cell + 1);
  }
  // The whole-block count supports the growth claim: at least k * s'_k.
  const std::int64_t block3 =
      a.count_leq(levels[2].s_prime + levels[2].block_len) - a.count_leq(levels[2].s_prime);
  CHECK(block3 >= 3 * levels[2].s_prime);

  CHECK_THROWS_AS(sparse_blocks_schedule(Rational(2), Rational(1, 2), 2), Error);
}

TEST_CASE("random gap rules are deterministic and respect their bounds") {
  const IntegerSet a = generate_set("bounded-gap:max=5,seed=7,limit=100000", 100'000);
  const IntegerSet b = generate_set("bounded-gap:max=5,seed=7,limit=100000", 100'000);
  CHECK(a.intervals() == b.intervals());
  const GapProfile g = gap_profile(a, a.size_within_horizon() - 1);
  CHECK(g.max_gap <= 5);

  const IntegerSet u = generate_set("unbounded-gap:seed=7,limit=100000", 100'000);
  const GapProfile gu = gap_profile(u, u.size_within_horizon() - 1);
  CHECK(gu.max_gap >= 1'024);
}

TEST_CASE("rule spec round trips") {
  for (const char* spec :
       {"squares", "kexp", "power:coeff=2,exponent=2", "blocks:a=4,b=n",
        "sparse-blocks:q=2,eps=1/2,s1=30", "bounded-gap:max=5,seed=7,limit=100000"}) {
    const auto rule = make_rule(spec);
    const auto again = make_rule(rule_spec(*rule));
    CHECK(rule->count_leq(50'000) == again->count_leq(50'000));
  }
  // Periodic rules round trip through their canonical encoding.
  const IntegerSet evens = generate_set("evens", 1'000);
  const auto again = make_rule(rule_spec(*evens.rule()));
  CHECK(again->count_leq(1'000) == 500);
  CHECK_THROWS_AS(make_rule("no-such-rule"), Error);
}

TEST_CASE("rule counting agrees with rule materialization") {
  // count_leq and append_intervals are independent code paths per rule; the
  // materialized prefix sums must reproduce the oracle exactly.
  std::mt19937_64 rng(31);
  for (const char* spec :
       {"squares", "kexp", "power:coeff=3/2,exponent=3/2", "blocks:a=4,b=n",
        "blocks:a=3/2,b=one", "sparse-blocks:q=2,eps=1/2,s1=30", "evens",
        "multiples:k=7", "bounded-gap:max=6,seed=2,limit=2000000",
        "unbounded-gap:seed=2,limit=2000000"}) {
    const std::int64_t horizon = 1'500'000;
    const IntegerSet a = generate_set(spec, horizon);
    const SetRule& rule = *a.rule();
    for (int i = 0; i < 200; ++i) {
      const std::int64_t x = 1 + static_cast<std::int64_t>(rng() % horizon);
      REQUIRE(a.count_leq(x) == rule.count_leq(x));  // materialized vs oracle
    }
  }
}

TEST_CASE("expected density tables") {
  CHECK(!expected_densities("squares").empty());
  CHECK(!expected_densities("blocks:a=4,b=n").empty());
  CHECK_THROWS_AS(expected_densities("power:coeff=17,exponent=9"), Error);
}

TEST_CASE("block partial-sum bounds") {
  // a_n = n^4, b_n = n^4 + n: both bounding sequences settle near 1/2.
  const QwsBounds q1 = qws_bounds("blocks:a=4,b=n", Rational(2), 1'000, {});
  CHECK(q1.lower > 0.45);
  CHECK(q1.upper < 0.6);
  CHECK(q1.estimate_within_bounds);

  // a_n = floor(n^1.5), b_n = a_n + 1: the lower bound sequence runs away.
  const QwsBounds q2 = qws_bounds("blocks:a=3/2,b=one", Rational(2), 1'000, {});
  CHECK(q2.lower > 5.0);

  // A finite set has vanishing upper q-density.
  const IntegerSet finite = IntegerSet::from_intervals({{1, 10}}, 1'000'000);
  EvalOptions o;
  o.n_max = 1'000;
  o.detect_blow_up = false;
  const DensityResult r = evaluate(finite, DensityKind::upper_q(Rational(2)), o);
  CHECK(r.upper_bound.to_double() < 0.05);
}
