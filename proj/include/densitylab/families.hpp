#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densitylab/density.hpp"
#include "densitylab/intset.hpp"

namespace densitylab {

enum class Verdict { yes, no, undetermined };
const char* to_string(Verdict v);

// A density-positivity family: A belongs iff its density of the given kind is
// strictly positive. Families are intensional (predicates), never materialized
// collections.
struct FamilySpec {
  DensityKind kind;
  std::string label;

  static FamilySpec positive(DensityKind kind);
};

// The sixteen hypercyclicity families: eight from the simple and classic
// Banach densities, eight from the parameterized Banach densities.
std::vector<FamilySpec> hypercyclicity_taxonomy(const Rational& q, const WeightSequence& m);

// Finite-evidence membership: yes when the bracket separates from zero from
// below, no only when the value is exactly zero, undetermined otherwise.
struct MembershipReport {
  Verdict verdict = Verdict::undetermined;
  DensityResult density;
};
MembershipReport membership(const FamilySpec& f, const IntegerSet& a,
                            const EvalOptions& opts = {});
Verdict is_member(const FamilySpec& f, const IntegerSet& a, const EvalOptions& opts = {});

struct UpwardClosureSample {
  int attempted = 0;
  int applicable = 0;  // pairs where the smaller set got a yes verdict
  int passed = 0;
  std::vector<std::string> failures;
};

// Structural check of the positivity family of the upper (m_n)-density:
// Furstenberg verdict against the growth criterion limsup m_n/n > 0, direct
// membership of N, sampled upward closure, and the dyadic witness structure
// behind the countable-decomposition condition.
struct FamilyCheckReport {
  Verdict furstenberg = Verdict::undetermined;
  bool criterion_analytic = false;
  ExtRational limsup_ratio;
  Verdict naturals_member = Verdict::undetermined;
  DensityResult naturals_density;
  bool proper = true;  // empty set rejected
  UpwardClosureSample upward;
  bool decomposition_ok = true;
  std::vector<std::string> notes;
};
FamilyCheckReport family_check(const WeightSequence& m, const EvalOptions& opts,
                               std::uint64_t seed, int samples = 100);

// Translation stability: densities of A - k bracket-overlap those of A (with
// the pointwise k/n slack) and membership verdicts agree.
struct TranslateCheckRow {
  std::int64_t k = 0;
  Verdict translated = Verdict::undetermined;
  bool brackets_overlap = false;
  DensityResult density;
};
struct TranslateCheckReport {
  Verdict original = Verdict::undetermined;
  DensityResult original_density;
  std::vector<TranslateCheckRow> rows;
  bool verdicts_agree = true;
  bool all_overlap = true;
};
TranslateCheckReport translate_check(const FamilySpec& f, const IntegerSet& a,
                                     const std::vector<std::int64_t>& ks,
                                     const EvalOptions& opts = {});

// Dyadic witness structure for the countable decomposition of the upper
// (m_n)-density family: A is delta-witnessed at level nu when some N >= nu
// has count(A, 1, m_N)/N > delta. Reports the largest dyadic delta witnessed
// at every sampled nu, and checks the finite-stability property of the
// witness (any superset of A ∩ [1, m_N] inherits it).
struct DecompositionReport {
  bool witnessed = false;
  Rational delta{0};
  std::vector<std::int64_t> witness_n;  // per sampled nu
  bool finite_stability_ok = true;
};
DecompositionReport decomposition_witnesses(const WeightSequence& m, const IntegerSet& a,
                                            const EvalOptions& opts, std::uint64_t seed);

}  // namespace densitylab
