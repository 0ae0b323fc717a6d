#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "densitylab/catalogue.hpp"
#include "densitylab/intset.hpp"
#include "densitylab/sampling.hpp"

using namespace densitylab;

namespace {

// Independent counting oracle over a sorted element vector.
std::int64_t brute_count(const std::vector<std::int64_t>& elems, std::int64_t a,
                         std::int64_t b) {
  std::int64_t c = 0;
  for (std::int64_t e : elems)
    if (e >= a && e <= b) ++c;
  return c;
}

std::vector<std::int64_t> expand(const IntegerSet& s) {
  std::vector<std::int64_t> out;
  for (const Interval& iv : s.intervals())
    for (std::int64_t x = iv.lo; x <= iv.hi; ++x) out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("canonical form merges and sorts") {
  const IntegerSet a = IntegerSet::from_intervals({{5, 9}, {1, 3}, {4, 4}, {20, 25}}, 100);
  REQUIRE(a.intervals().size() == 2);
  CHECK(a.intervals()[0] == Interval{1, 9});
  CHECK(a.intervals()[1] == Interval{20, 25});
  // Union with the empty set is the identity (canonicalization idempotent).
  const IntegerSet same = boolean_op(a, IntegerSet::empty_set(100), SetOp::unite);
  CHECK(same.intervals() == a.intervals());
}

TEST_CASE("counting matches the benchmark examples") {
  const IntegerSet squares = generate_set("squares", 10'000);
  CHECK(squares.count(1, 100) == 10);
  CHECK(IntegerSet::empty_set(1'000'000).count(1, 1'000'000) == 0);
  CHECK(IntegerSet::naturals(100).count(5, 14) == 10);
}

TEST_CASE("count agrees with element enumeration on random sets") {
  std::mt19937_64 rng(3);
  RandomSetParams params;
  params.horizon = 5'000;
  params.intervals = 25;
  params.max_len = 12;
  for (int t = 0; t < 200; ++t) {
    const IntegerSet a = random_interval_set(rng, params);
    const auto elems = expand(a);
    CHECK(a.size_within_horizon() == static_cast<std::int64_t>(elems.size()));
    for (int w = 0; w < 20; ++w) {
      const std::int64_t x = random_in(rng, 1, params.horizon);
      const std::int64_t y = random_in(rng, x, params.horizon);
      REQUIRE(a.count(x, y) == brute_count(elems, x, y));
    }
  }
}

TEST_CASE("translate") {
  const IntegerSet evens = generate_set("evens", 1'000);
  const IntegerSet shifted = translate(evens, 1);
  CHECK(shifted.contains(3));
  CHECK(shifted.contains(5));
  CHECK(!shifted.contains(2));

  const IntegerSet tiny = IntegerSet::from_elements({1, 2, 3}, 10);
  const IntegerSet down = translate(tiny, -2);
  CHECK(down.size_within_horizon() == 1);
  CHECK(down.contains(1));

  // count(translate(A,k), a, b) == count(A, a-k, b-k) whenever in range.
  std::mt19937_64 rng(5);
  RandomSetParams params;
  params.horizon = 10'000;
  params.intervals = 30;
  for (int t = 0; t < 100; ++t) {
    const IntegerSet a = random_interval_set(rng, params);
    const std::int64_t k = random_in(rng, 1, 50);
    const IntegerSet b = translate(a, k);
    const std::int64_t x = random_in(rng, k + 1, params.horizon);
    const std::int64_t y = random_in(rng, x, params.horizon);
    CHECK(b.count(x, y) == a.count(x - k, y - k));
  }
}

TEST_CASE("dilate") {
  const IntegerSet doubled = dilate(IntegerSet::naturals(1'000), 2);
  CHECK(doubled.contains(2));
  CHECK(doubled.contains(4));
  CHECK(!doubled.contains(3));
  const IntegerSet tripled = dilate(IntegerSet::from_elements({1, 3}, 10), 3);
  CHECK(tripled.size_within_horizon() == 2);
  CHECK(tripled.contains(3));
  CHECK(tripled.contains(9));
  CHECK_THROWS_AS(dilate(doubled, 0), Error);
}

TEST_CASE("boolean combinations") {
  const IntegerSet evens = generate_set("evens", 1'000);
  const IntegerSet odds = generate_set("odds", 1'000);
  const IntegerSet all = boolean_op(evens, odds, SetOp::unite);
  CHECK(all.count(1, 1'000) == 1'000);

  const IntegerSet mult4 = generate_set("multiples:k=4", 1'000);
  const IntegerSet sym = boolean_op(evens, mult4, SetOp::sym_diff);
  CHECK(sym.contains(2));
  CHECK(sym.contains(6));
  CHECK(sym.contains(10));
  CHECK(!sym.contains(4));
  CHECK(!sym.contains(8));
  // Periodic backing survives the composition.
  REQUIRE(sym.periodic() != nullptr);
  CHECK(sym.count_leq(4'000'000) == 1'000'000);

  const IntegerSet squares = generate_set("squares", 100);
  CHECK(complement(squares).count(1, 100) == 90);
}

TEST_CASE("pointwise identities on random pairs") {
  std::mt19937_64 rng(7);
  RandomSetParams params;
  params.horizon = 100'000;
  params.intervals = 50;
  for (int t = 0; t < 100; ++t) {
    const IntegerSet a = random_interval_set(rng, params);
    const IntegerSet b = random_interval_set(rng, params);
    const IntegerSet ac = complement(a);
    const IntegerSet u = boolean_op(a, b, SetOp::unite);
    const IntegerSet i = boolean_op(a, b, SetOp::intersect);
    const IntegerSet d = boolean_op(a, b, SetOp::sym_diff);
    for (int w = 0; w < 5; ++w) {
      const std::int64_t x = random_in(rng, 1, params.horizon);
      const std::int64_t y = random_in(rng, x, params.horizon);
      CHECK(a.count(x, y) + ac.count(x, y) == y - x + 1);
      CHECK(u.count(x, y) <= a.count(x, y) + b.count(x, y));
      CHECK(d.count(x, y) + i.count(x, y) == u.count(x, y));
    }
  }
}

TEST_CASE("gap profiles") {
  const GapProfile evens = gap_profile(generate_set("evens", 1'000), 20);
  for (std::int64_t g : evens.gaps) CHECK(g == 2);
  CHECK(!evens.gap_exceeds(2));

  const GapProfile sq = gap_profile(generate_set("squares", 10'000), 20);
  CHECK(sq.gaps[0] == 3);
  CHECK(sq.gaps[1] == 5);
  CHECK(sq.gaps[2] == 7);
  CHECK(sq.gap_exceeds(20));

  const GapProfile ke = gap_profile(generate_set("kexp", 1'000'000), 10);
  CHECK(ke.gap_exceeds(100'000));

  CHECK_THROWS_AS(gap_profile(IntegerSet::from_elements({1, 2}, 10), 5), Error);
}

TEST_CASE("horizon handling") {
  const IntegerSet fixed = IntegerSet::from_elements({10, 20, 30}, 100);
  CHECK_THROWS_AS(fixed.count(1, 101), Error);
  CHECK_THROWS_AS(fixed.with_horizon(200), Error);

  // Rule-backed sets extend beyond the materialized horizon; extension
  // proceeds in doubling steps.
  const IntegerSet squares = generate_set("squares", 100);
  CHECK(squares.count(1, 1'000'000) == 1'000);
  const IntegerSet grown = squares.with_horizon(1'000);
  CHECK(grown.horizon() >= 1'000);
  CHECK(grown.count(1, 1'000) == 31);
  CHECK(grown.size_within_horizon() ==
        static_cast<std::int64_t>(grown.intervals().size()));
  // Extending and truncating back reproduces the original interval list.
  CHECK(grown.with_horizon(100).intervals() == squares.intervals());
}

TEST_CASE("window extremes agree with brute force") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 400; ++t) {
    const std::int64_t horizon = 300 + random_in(rng, 0, 900);
    RandomSetParams params;
    params.horizon = horizon;
    params.intervals = static_cast<int>(random_in(rng, 1, 40));
    params.max_len = 15;
    const IntegerSet a = random_interval_set(rng, params);
    const std::int64_t w = random_in(rng, 1, 80);
    if (horizon <= w + 2) continue;
    const std::int64_t n_lo = random_in(rng, 0, 40);
    const std::int64_t n_hi = random_in(rng, n_lo, horizon - w);
    const WindowExtremes ext = window_extremes(a, w, n_lo, n_hi);
    std::int64_t mn = INT64_MAX, mx = -1;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      const std::int64_t c = a.count_leq(n + w) - a.count_leq(n);
      mn = std::min(mn, c);
      mx = std::max(mx, c);
    }
    REQUIRE(ext.min_count == mn);
    REQUIRE(ext.max_count == mx);
    CHECK(a.count_leq(ext.argmin_n + w) - a.count_leq(ext.argmin_n) == mn);
    CHECK(a.count_leq(ext.argmax_n + w) - a.count_leq(ext.argmax_n) == mx);
  }
}

TEST_CASE("window extremes on periodic and rule-backed sets") {
  std::mt19937_64 rng(17);
  // Periodic path vs the explicit walk on a materialized copy.
  for (int t = 0; t < 100; ++t) {
    const std::int64_t step = random_in(rng, 2, 9);
    const std::int64_t offset = random_in(rng, 1, step);
    const IntegerSet a =
        generate_set("arithmetic:step=" + std::to_string(step) +
                         ",offset=" + std::to_string(offset),
                     50'000);
    const std::int64_t w = random_in(rng, 1, 200);
    const std::int64_t n_lo = random_in(rng, offset, 100);
    const std::int64_t n_hi = n_lo + step + random_in(rng, 0, 400);
    const WindowExtremes ext = window_extremes(a, w, n_lo, n_hi);
    std::int64_t mn = INT64_MAX, mx = -1;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      const std::int64_t c = a.count_leq(n + w) - a.count_leq(n);
      mn = std::min(mn, c);
      mx = std::max(mx, c);
    }
    REQUIRE(ext.min_count == mn);
    REQUIRE(ext.max_count == mx);
  }
  // Rule-backed streaming beyond the materialized horizon.
  const IntegerSet squares = generate_set("squares", 1'000);
  const WindowExtremes far = window_extremes(squares, 100, 1'000'000, 2'000'000);
  CHECK(far.min_count == 0);
  CHECK(far.max_count <= 1);  // consecutive squares out there differ by > 100

  // General periodic forms: random patterns with runs and a prefix.
  for (int t = 0; t < 120; ++t) {
    const std::int64_t p = random_in(rng, 3, 24);
    PeriodicForm form;
    form.start = random_in(rng, 1, 12);
    form.period = p;
    std::int64_t o = 0;
    while (o < p) {
      if (rng() % 2) {
        const std::int64_t hi = std::min(p - 1, o + random_in(rng, 0, 3));
        form.pattern.push_back({o, hi});
        o = hi + 2;
      } else {
        ++o;
      }
    }
    if (form.pattern.empty()) form.pattern.push_back({0, 0});
    if (form.start > 1) form.prefix.push_back({1, random_in(rng, 1, form.start - 1)});
    const IntegerSet a = IntegerSet::from_rule(make_periodic_rule(form), 20'000);
    const std::int64_t w = random_in(rng, 1, 60);
    const std::int64_t n_lo = random_in(rng, form.start, form.start + 20);
    const std::int64_t n_hi = n_lo + p + random_in(rng, 0, 300);
    const WindowExtremes ext = window_extremes(a, w, n_lo, n_hi);
    std::int64_t mn = INT64_MAX, mx = -1;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      const std::int64_t c = a.count_leq(n + w) - a.count_leq(n);
      mn = std::min(mn, c);
      mx = std::max(mx, c);
    }
    REQUIRE(ext.min_count == mn);
    REQUIRE(ext.max_count == mx);
  }
}

TEST_CASE("chunked streaming agrees with the materialized sweep") {
  // Far window scans on rule-backed sets stream intervals in chunks; the
  // result must match a fully materialized twin across chunk boundaries.
  std::mt19937_64 rng(99);
  const std::int64_t limit = 3'000'000;
  for (int trial = 0; trial < 6; ++trial) {
    const IntegerSet backed =
        generate_set("bounded-gap:max=" + std::to_string(2 + rng() % 9) +
                         ",seed=" + std::to_string(trial) + ",limit=" + std::to_string(limit),
                     1'000);
    std::vector<Interval> all;
    backed.rule()->append_intervals(1, limit, all);
    const IntegerSet twin = IntegerSet::from_intervals(all, limit);
    for (int i = 0; i < 4; ++i) {
      const std::int64_t w = 1 + random_in(rng, 0, 4'999);
      const std::int64_t n_lo = random_in(rng, 400'000, 1'400'000);
      const std::int64_t n_hi = n_lo + random_in(rng, 1, 1'500'000);
      if (n_hi + w > limit) continue;
      const WindowExtremes a = window_extremes(backed, w, n_lo, n_hi);
      const WindowExtremes b = window_extremes(twin, w, n_lo, n_hi);
      REQUIRE(a.min_count == b.min_count);
      REQUIRE(a.max_count == b.max_count);
    }
  }
}

TEST_CASE("multi-window extremes match single calls") {
  std::mt19937_64 rng(21);
  RandomSetParams params;
  params.horizon = 20'000;
  params.intervals = 60;
  const IntegerSet a = random_interval_set(rng, params);
  const std::vector<std::int64_t> ws = {1, 7, 50, 333, 1'000};
  const auto multi = window_extremes_multi(a, ws, 10, 15'000);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const WindowExtremes one = window_extremes(a, ws[i], 10, 15'000);
    CHECK(multi[i].min_count == one.min_count);
    CHECK(multi[i].max_count == one.max_count);
  }
}
