// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dialectic/legacy.hpp"
#include "dialectic/run.hpp"

namespace dialectic {

struct FuzzParams {
    std::size_t max_rules = 8;
    std::uint64_t max_stage = 40;
    std::uint64_t axiom_span = 12;  // premises drawn from a_0..a_{span-1}
    std::size_t max_width = 3;
    std::uint64_t horizon = 1000;   // r is defined far enough for this many stages
};

QSystem random_qsystem(std::mt19937_64& rng, const FuzzParams& params);
LegacySystem random_legacy(std::mt19937_64& rng, const FuzzParams& params);

/// Translates to the legacy formalism and compares the two runs.
AlignmentReport diff_backward(const QSystem& system, std::uint64_t horizon,
                              const LegacyOptions& options = {});
/// Translates a legacy system to a q-system and compares the two runs.
AlignmentReport diff_forward(const LegacySystem& legacy, std::uint64_t horizon,
                             const LegacyOptions& options = {});

struct FuzzSummary {
    std::size_t systems = 0;
    std::size_t backward_agreed = 0;
    std::size_t forward_agreed = 0;
    std::string first_failure;
};

/// System i is drawn from seed_seq{seed, i}; `jobs` threads share the work
/// and the summary is the same for any jobs value.
FuzzSummary fuzz_diff(std::uint64_t seed, std::size_t count, std::uint64_t horizon,
                      const LegacyOptions& options = {}, unsigned jobs = 1);
std::string format(const FuzzSummary& summary);

}  // namespace dialectic
