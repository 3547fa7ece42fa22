// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dialectic/run.hpp"

namespace dialectic {

/// <x, F> entering the approximation at `stage`.
struct LegacyPair {
    std::uint64_t stage = 1;
    std::uint64_t x = 0;
    std::set<std::uint64_t> F;

    friend bool operator==(const LegacyPair&, const LegacyPair&) = default;
};

/// The quintuple <H, f, f^-, c, c^-> with a staged approximation H_s.
struct LegacySystem {
    std::vector<LegacyPair> pairs;
    /// H_s(Y) contains Y itself from this stage on.
    std::optional<std::uint64_t> inclusion_stage;
    /// f restricted to 0..n-1; identity beyond. Must be a permutation of 0..n-1.
    std::vector<std::uint64_t> f_prefix;
    std::map<std::uint64_t, std::uint64_t> f_minus;
    std::uint64_t c = 0;
    std::uint64_t c_minus = 1;

    std::uint64_t f(std::uint64_t i) const;
    /// Throws kTranslation when v is not in the image of the stored prefix.
    std::uint64_t f_inverse(std::uint64_t v) const;
    /// H_s(Y).
    std::set<std::uint64_t> apply(std::uint64_t s, const std::set<std::uint64_t>& Y) const;
};

struct LegacyState {
    /// r_s(x) for x = 0..p; stacks above p are empty and not stored.
    std::vector<std::vector<std::uint64_t>> stacks;
    std::uint64_t p = 0;
    std::uint64_t h = 0;
    std::set<std::uint64_t> A;

    std::optional<std::uint64_t> rho(std::uint64_t x) const;
    /// L_s(x).
    std::set<std::uint64_t> L(std::uint64_t x) const;

    friend bool operator==(const LegacyState&, const LegacyState&) = default;
};

struct LegacyOptions {
    /// Fault injection: let a c^- hit win over an earlier c hit.
    bool swap_clause_priority = false;
};

LegacyState legacy_initial(const LegacySystem& system);
LegacyState legacy_step(const LegacySystem& system, const LegacyState& state, std::uint64_t s,
                        const LegacyOptions& options = {});
/// States 0..stages.
std::vector<LegacyState> run_legacy(const LegacySystem& system, std::uint64_t stages,
                                    const LegacyOptions& options = {});

/// chi_s(i) = H_s(L_s(i)), recomputed without any incremental state.
std::set<std::uint64_t> chi(const LegacySystem& system, const LegacyState& state,
                            std::uint64_t s, std::uint64_t i);

QSystem forward_translate(const LegacySystem& legacy);
LegacySystem backward_translate(const QSystem& qsys);

/// Offset between a q-run and the legacy run of its backward translation.
inline constexpr std::uint64_t kBackwardOffset = 5;

enum class AlignmentDirection { kForward, kBackward };

struct AlignmentReport {
    bool agreed = true;
    std::uint64_t stages_checked = 0;
    std::optional<std::uint64_t> mismatch_stage;
    std::optional<std::uint64_t> mismatch_position;
    std::string detail;
};

/// Forward: |sigma_s| = p(s) and sigma_s(x) = f^{-1}(rho_s(x)) or * for s = 0..horizon.
/// Backward: |sigma_{s-5}| = p(s) - 2 and sigma_{s-5}(n) = rho_s(n+2) - 2 or *.
AlignmentReport check_alignment(const RunTrace& trace, std::span<const LegacyState> legacy_run,
                                AlignmentDirection direction, const LegacySystem& legacy);

std::string format(const LegacyState& state);
std::string format(const AlignmentReport& report);

}  // namespace dialectic
