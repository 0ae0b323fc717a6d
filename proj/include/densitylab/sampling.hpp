#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "densitylab/intset.hpp"

namespace densitylab {

struct RandomSetParams {
  std::int64_t horizon = 1'000'000;
  int intervals = 100;
  std::int64_t max_len = 50;
};

std::int64_t random_in(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

IntegerSet random_interval_set(std::mt19937_64& rng, const RandomSetParams& p = {});

// (A, B) with A a subset of B.
std::pair<IntegerSet, IntegerSet> random_subset_pair(std::mt19937_64& rng,
                                                     const RandomSetParams& p = {});

}  // namespace densitylab
