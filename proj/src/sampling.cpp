#include "densitylab/sampling.hpp"

namespace densitylab {

std::int64_t random_in(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

IntegerSet random_interval_set(std::mt19937_64& rng, const RandomSetParams& p) {
  std::vector<Interval> ivs;
  ivs.reserve(static_cast<std::size_t>(p.intervals));
  for (int i = 0; i < p.intervals; ++i) {
    const std::int64_t lo = random_in(rng, 1, p.horizon);
    const std::int64_t hi = std::min(p.horizon, lo + random_in(rng, 0, p.max_len - 1));
    ivs.push_back({lo, hi});
  }
  return IntegerSet::from_intervals(std::move(ivs), p.horizon);
}

std::pair<IntegerSet, IntegerSet> random_subset_pair(std::mt19937_64& rng,
                                                     const RandomSetParams& p) {
  IntegerSet a = random_interval_set(rng, p);
  IntegerSet extra = random_interval_set(rng, p);
  IntegerSet b = boolean_op(a, extra, SetOp::unite);
  return {std::move(a), std::move(b)};
}

}  // namespace densitylab
