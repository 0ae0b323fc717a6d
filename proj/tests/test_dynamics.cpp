#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "densitylab/catalogue.hpp"
#include "densitylab/dynamics.hpp"

using namespace densitylab;

namespace {

Vec unit(int dim, int j) {
  Vec v(static_cast<std::size_t>(dim), 0.0);
  v[static_cast<std::size_t>(j)] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("metric basics") {
  const SpaceModel space = SpaceModel::frechet(16);
  const Vec zero(16, 0.0);
  CHECK(space.metric(zero, zero) == 0.0);
  const Vec e1 = unit(16, 0);
  CHECK(space.metric(e1, zero) > 0.0);
  CHECK(space.metric(e1, zero) == space.metric(zero, e1));
  // d is bounded by sum 2^-n = 1.
  Vec huge(16, 1e12);
  CHECK(space.metric(huge, zero) < 1.0);

  const SpaceModel l1 = SpaceModel::banach(4, {1.0, 0.5, 0.25, 0.125});
  CHECK(l1.metric({1, 1, 0, 0}, {0, 1, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("shift orbits annihilate finite support") {
  const int d = 8;
  const OperatorSpec op = OperatorSpec::constant_shift(2.0, d);
  const SpaceModel space = SpaceModel::frechet(d);
  const Vec x = unit(d, 4);  // e_5 in 1-based indexing

  const OrbitResult orb = orbit(op, space, x, 6);
  REQUIRE(orb.states.size() == 6);
  // T^2 e_5 = 4 e_3.
  CHECK(orb.states[1][2] == 4.0);
  for (int j = 0; j < d; ++j)
    if (j != 2) CHECK(orb.states[1][static_cast<std::size_t>(j)] == 0.0);
  // T^5 e_5 = 0.
  for (double c : orb.states[4]) CHECK(c == 0.0);

  // Unit weights shift coordinates left unchanged.
  const OperatorSpec ident = OperatorSpec::constant_shift(1.0, d);
  Vec y = {1, 2, 3, 4, 5, 6, 7, 8};
  const OrbitResult orb2 = orbit(ident, space, y, 1);
  CHECK(orb2.states[0][0] == 2.0);
  CHECK(orb2.states[0][6] == 8.0);
  CHECK(orb2.states[0][7] == 0.0);
}

TEST_CASE("orbit overflow is flagged") {
  const OperatorSpec op = OperatorSpec::constant_shift(1e200, 4);
  Vec x = {0, 0, 0, 1};
  const OrbitResult orb = orbit(op, SpaceModel::frechet(4), x, 4);
  CHECK(orb.overflow);
  CHECK(orb.truncated_at >= 2);
}

TEST_CASE("hitting sets") {
  const int d = 8;
  const SpaceModel space = SpaceModel::frechet(d);

  // Orbit of e_5 under the doubling shift dies at n = 5 and stays at 0.
  const OperatorSpec op = OperatorSpec::constant_shift(2.0, d);
  const HittingSet hs = hitting_set(op, space, unit(d, 4), {Vec(d, 0.0), 0.01}, 50);
  CHECK(hs.times.contains(5));
  CHECK(hs.times.contains(50));
  CHECK(!hs.times.contains(4));

  // A vector at the origin never reaches a ball centered away from it.
  Ball off{unit(d, 0), 0.05};
  const HittingSet none = hitting_set(op, space, Vec(d, 0.0), off, 50);
  CHECK(none.times.is_empty_within_horizon());

  // Planted oracle: the hitting set is the plant, exactly.
  const IntegerSet evens = generate_set("evens", 10'000);
  const Vec target(d, 0.0);
  Vec far(d, 0.0);
  far[0] = 2.0;
  const OperatorSpec oracle = OperatorSpec::oracle(evens, target, far);
  const HittingSet oh = hitting_set(oracle, space, target, {target, 0.25}, 10'000);
  CHECK(oh.times.count(1, 10'000) == 5'000);
  CHECK(oh.times.contains(2));
  CHECK(!oh.times.contains(3));
}

TEST_CASE("oracle classification matches the plant") {
  const int d = 8;
  const SpaceModel space = SpaceModel::frechet(d);
  const Vec target(d, 0.0);
  Vec far(d, 0.0);
  far[0] = 4.0;
  const std::vector<Ball> grid = {{target, 0.125}, {target, 0.25}};
  const Rational q(2);
  const WeightSequence m = WeightSequence::power(Rational(2));
  EvalOptions opts;
  opts.n_max = 20'000;
  opts.s_max = 64;

  {
    const OperatorSpec op = OperatorSpec::oracle(generate_set("evens", 20'000), target, far);
    const ClassificationReport rep = classify(op, space, target, grid, q, m, opts);
    CHECK(rep.row("frequently-hypercyclic")->verdict == Verdict::yes);
    CHECK(rep.row("reiteratively-hypercyclic")->verdict == Verdict::yes);
    // The k-th even is 2k <= 2 k^2 but also 2k <= 2k, so a small L works
    // against the n^2 scale; the witness and its sup are reported per ball.
    REQUIRE(rep.witnesses.size() == grid.size());
    CHECK(rep.witnesses[0].found);
    CHECK(rep.witness_sup_L.has_value());
    CHECK(rep.witnesses[0].subsequence_head[0] == 2);
  }
  {
    // Squares: q-frequent (lower q-density 1) but not frequent (density 0).
    const OperatorSpec op =
        OperatorSpec::oracle(generate_set("squares", 20'000), target, far);
    const ClassificationReport rep = classify(op, space, target, grid, q, m, opts);
    CHECK(rep.row("q-frequently-hypercyclic")->verdict == Verdict::yes);
    CHECK(rep.row("frequently-hypercyclic")->verdict == Verdict::no);
  }
  {
    // The zero vector under a shift: hitting sets are empty for balls away
    // from the origin, so every family verdict is no.
    const OperatorSpec op = OperatorSpec::constant_shift(2.0, d);
    const std::vector<Ball> g2 = {{unit(d, 0), 0.1}, {target, 0.25}};
    const ClassificationReport rep = classify(op, space, Vec(d, 0.0), g2, q, m, opts);
    for (const FamilyVerdictRow& row : rep.rows) CHECK(row.verdict == Verdict::no);
  }
}

TEST_CASE("boundary distances are excluded from hitting sets") {
  // With the weighted l1 metric the distances are exact in binary floating
  // point, so a radius can sit exactly on the boundary.
  const SpaceModel l1 = SpaceModel::banach(2, {1.0, 1.0});
  const Vec target = {0.5, 0.0};  // d(target, center) = 0.5 exactly
  const Vec far = {8.0, 0.0};
  const OperatorSpec op = OperatorSpec::oracle(generate_set("evens", 1'000), target, far);
  const HittingSet hs = hitting_set(op, l1, target, {{0.0, 0.0}, 0.5}, 1'000);
  CHECK(hs.boundary_ambiguous > 0);
  CHECK(hs.times.is_empty_within_horizon());
}

TEST_CASE("default ball grid") {
  const auto grid = default_ball_grid(2, {0.25, 0.0625}, 50);
  CHECK(!grid.empty());
  CHECK(grid.size() <= 50);
  CHECK(grid[0].center.size() == 2);
}

TEST_CASE("subsequence witnesses") {
  // Evens against m_k = k: the k-th element is 2k, so L = 2.
  const MnWitnessResult evens =
      mn_witness(generate_set("evens", 200'000), WeightSequence::identity(),
                 {1, 2, 4, 8}, 50'000);
  CHECK(evens.found);
  CHECK(evens.L == 2.0);
  REQUIRE(evens.sup_ratio_exact.has_value());
  CHECK(*evens.sup_ratio_exact == Rational(2));

  // n_k = 2k^2 against k^2: ratio exactly 2.
  const MnWitnessResult twok =
      mn_witness(generate_set("power:coeff=2,exponent=2", 1'000'000),
                 WeightSequence::power(Rational(2)), {1, 2, 4, 8}, 10'000);
  CHECK(twok.found);
  CHECK(twok.L == 2.0);
  REQUIRE(twok.lower_q_consistent.has_value());
  CHECK(*twok.lower_q_consistent);

  // floor(k e^k) against e^k: the ratio is k, past any grid.
  const MnWitnessResult ke =
      mn_witness(generate_set("kexp", 1'000'000), WeightSequence::expo(WeightBase::e()),
                 {1, 10, 100, 1'000}, 100'000);
  CHECK(!ke.found);
  CHECK(ke.diverged);
}
