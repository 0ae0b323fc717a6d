#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "densitylab/density.hpp"
#include "densitylab/intset.hpp"

namespace densitylab {

// Generator rules addressable by compact spec strings of the form
// "name" or "name:key=value,key=value". The catalogue covers:
//   squares                      n_k = k^2
//   power:coeff=C,exponent=P     n_k = floor(C * k^P)         (C, P rational)
//   kexp                         n_k = floor(k * e^k)
//   blocks:a=E,b=n|one           union of [a_n, a_n + n] or [a_n, a_n + 1],
//                                a_n = floor(n^E)
//   sparse-blocks:q=Q,eps=E,s1=S block/cell family with per-cell count
//                                constraints (see SparseBlocksSchedule)
//   arithmetic:step=K,offset=O   the progression {O, O+K, O+2K, ...}
//   bounded-gap:max=M,seed=S[,limit=L]    random gaps in [1, M]
//   unbounded-gap:seed=S[,limit=L]        random gaps with a doubling burst
//   naturals | empty | evens | odds | multiples:k=K
std::shared_ptr<const SetRule> make_rule(const std::string& spec);

// Canonical spec string of a rule (parses back to an equivalent rule).
std::string rule_spec(const SetRule& rule);

IntegerSet generate_set(const std::string& spec, std::int64_t horizon);

struct RuleInfo {
  std::string name;
  std::string params_doc;
  std::string summary;
};
const std::vector<RuleInfo>& rule_catalogue();

// Block/cell schedule of the sparse-blocks family: blocks [s'_k + 1,
// s'_k + floor(s'_k^q)] subdivided into cells of width floor(s_k^q),
// each carrying ceil(s_k^(1-eps)) evenly spread points, where
// s_k = floor(s'_k ^ ((q-1)/(2q(q+eps-1)))) and the schedule s'_{k+1} =
// s'_k + floor(s'_k^q) + 1 is the least one keeping blocks disjoint. The
// defining inequalities are validated at construction.
struct SparseBlocksLevel {
  std::int64_t s_prime = 0;   // block anchor s'_k
  std::int64_t block_len = 0; // floor(s'_k^q)
  std::int64_t s = 0;         // cell scale s_k
  std::int64_t cell_width = 0;
  std::int64_t cells = 0;     // cells materializable within the block
  std::int64_t per_cell = 0;  // points per cell
};
std::vector<SparseBlocksLevel> sparse_blocks_schedule(const Rational& q, const Rational& eps,
                                                      std::int64_t s1);

// Expected density verdicts for catalogued rules, consumed by the
// expected-check suite.
struct ExpectedDensity {
  DensityKind kind;
  enum class Expect { exact_value, zero, positive_finite, infinite, bounded_by } expect;
  Rational value{0};  // exact_value / bounded_by payload
  EvalOptions options;
  std::string note;
};
std::vector<ExpectedDensity> expected_densities(const std::string& rule_spec_str);

// Two-sided block bounds for the upper q-density of a blocks rule: with
// c_n = |N ∩ [a_n, b_n]| and C_n the partial sums,
//   limsup C_n / a_{n+1}^(1/q)  <=  upper q-density  <=  limsup C_n / a_n^(1/q).
struct QwsBounds {
  double lower = 0;
  double upper = 0;
  DensityResult upper_q;
  bool estimate_within_bounds = false;
};
QwsBounds qws_bounds(const std::string& blocks_spec, const Rational& q, std::int64_t n_max,
                     const EvalOptions& opts = {});

}  // namespace densitylab
