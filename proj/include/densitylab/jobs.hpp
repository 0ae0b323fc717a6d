#pragma once

#include "densitylab/io.hpp"

namespace densitylab {

// Executes one batch job described by a JSON document and returns the full
// output document. Deterministic: the same job (including its seed) always
// produces a byte-identical dump. The job echo, seed, and undetermined
// verdict count are part of the output header.
//
// Commands: density, profile, chain-check, trichotomy, family-check,
// generate, expected-check, classify, witness, suite.
json run_job(const json& job);

}  // namespace densitylab
