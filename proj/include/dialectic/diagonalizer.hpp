// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dialectic/opponents.hpp"
#include "dialectic/run.hpp"

namespace dialectic {

/// Where a strategy rests between stages. S3, S4, S6 and S8 are transitions
/// and only show up in the timeline.
enum class StrategyStep : std::uint8_t {
    kDeactivated,
    kS2Wait,
    kPO2Wait,
    kS5Wait,
    kS7Wait,
    kS8Done,
};

const char* to_string(StrategyStep step);

struct StrategyState {
    std::size_t index = 0;
    StrategyStep step = StrategyStep::kDeactivated;
    std::uint64_t N = 0;
    AxiomSet Z;
    AxiomSet S;
    /// PredictOrder working set and the axioms it looks for.
    AxiomSet E;
    AxiomSet targets;
    /// Empty until PredictOrder returns.
    std::vector<AxiomId> rho;
    std::optional<std::uint64_t> l, m, n;
    std::optional<AxiomId> a_I, a_J;
    /// The third fresh axiom, removed on entering Part 2 (a_N unless direct).
    std::optional<AxiomId> a_X;
    /// g_l differed from a_N, so Part 1 was skipped.
    bool direct = false;

    // Polling state, reset on activation.
    std::size_t scan = 0;
    std::array<std::optional<std::uint64_t>, 3> first_seen;
    std::vector<AxiomId> tau;
    std::size_t history_seen = 0;
    std::size_t matched = 0;
};

struct TimelineEntry {
    std::uint64_t stage = 0;
    std::size_t strategy = 0;
    std::string text;
};

struct AppendedRule {
    std::size_t strategy = 0;
    /// "S3", "S4", "S6" or "S8".
    std::string step;
    std::uint64_t N = 0;
    AxiomSet S;
    ConsequenceRule rule;
};

struct ActivationRecord {
    std::uint64_t stage = 0;
    std::size_t strategy = 0;
    std::uint64_t N = 0;
    /// Largest index mentioned before this activation.
    std::uint64_t mentioned = 0;
};

struct DiagonalizerOptions {
    /// Stability window for the belief estimates; 0 picks horizon / 4.
    std::uint64_t window = 0;
    std::uint64_t fuel_cap = std::uint64_t{1} << 20;
};

struct OpponentVerdict {
    std::size_t index = 0;
    std::string name;
    StrategyStep step = StrategyStep::kDeactivated;
    std::uint64_t N = 0;
    std::optional<AxiomId> witness;
    bool gamma_stable = false;
    bool theta_stable = false;
    /// Set for invalid, diverging or non-p opponents.
    std::optional<std::string> status;
};

struct DiagonalizationReport {
    std::uint64_t horizon = 0;
    std::uint64_t window = 0;
    std::vector<TimelineEntry> timeline;
    std::vector<AppendedRule> rules;
    ReplacementMap replacement;
    RunTrace trace;
    std::vector<ActivationRecord> activations;
    /// Per strategy: stages at which it was deactivated by a higher one.
    std::vector<std::vector<std::uint64_t>> injuries;
    /// Per strategy: stages at which it acted.
    std::vector<std::vector<std::uint64_t>> actions;
    std::vector<StrategyState> strategies;
    std::vector<OpponentVerdict> verdicts;
};

/// PO1 to PO3 from scratch: the shortest prefix of tau reaching a target, or
/// nullopt while some iterate for j < n is still out of fuel.
std::optional<std::vector<AxiomId>> predict_order(PartialPSystem& theta, const AxiomSet& E,
                                                  std::uint64_t n, const AxiomSet& targets,
                                                  std::uint64_t fuel);
/// Same, with the working set and targets read from a strategy past Step 2.
std::optional<std::vector<AxiomId>> predict_order(PartialPSystem& theta,
                                                  const StrategyState& strategy,
                                                  std::uint64_t fuel);

/// Strategy i plays against opponent i; lower index means higher priority.
class Scheduler {
public:
    explicit Scheduler(std::vector<PartialPSystem> opponents, DiagonalizerOptions options = {});

    /// Runs the current stage and moves to the next one.
    void schedule_stage();

    std::uint64_t stage() const noexcept { return stage_; }
    const std::vector<StrategyState>& strategies() const noexcept { return strategies_; }
    const std::vector<PartialPSystem>& opponents() const noexcept { return opponents_; }
    const QSystem& gamma() const noexcept { return gamma_; }
    const BeliefString& gamma_sigma() const noexcept { return runner_.sigma(); }
    const std::vector<TraceEvent>& gamma_events() const noexcept { return events_; }
    const std::vector<TimelineEntry>& timeline() const noexcept { return timeline_; }
    const std::vector<AppendedRule>& rules() const noexcept { return rules_; }
    const std::vector<ActivationRecord>& activations() const noexcept { return activations_; }

    DiagonalizationReport report() const;

private:
    std::uint64_t fuel() const;
    bool ready(StrategyState& st);
    void act(StrategyState& st);
    void activate(StrategyState& st);
    void deactivate_below(std::size_t i);
    void append(StrategyState& st, const char* step, AxiomSet premises, Symbol conclusion);
    void enter_predict(StrategyState& st);
    void finish_predict(StrategyState& st);
    void enter_s5(StrategyState& st);
    AxiomSet protected_above(std::size_t i) const;
    void log(std::size_t i, std::string text);
    void mention(std::uint64_t index);

    DiagonalizerOptions options_;
    std::vector<PartialPSystem> opponents_;
    std::vector<StrategyState> strategies_;
    QSystem gamma_;
    Runner runner_;
    std::vector<TraceEvent> events_;
    std::uint64_t stage_ = 0;
    std::uint64_t mentioned_ = 0;
    std::uint64_t r_cursor_ = 0;
    std::vector<TimelineEntry> timeline_;
    std::vector<AppendedRule> rules_;
    std::vector<ActivationRecord> activations_;
    std::vector<std::vector<std::uint64_t>> injuries_;
    std::vector<std::vector<std::uint64_t>> actions_;
};

DiagonalizationReport diagonalize(std::vector<PartialPSystem> opponents, std::uint64_t horizon,
                                  const DiagonalizerOptions& options = {});

/// Timeline, rules, then one `opponent <i>: <step> witness=<token|->` line
/// per opponent, each optionally followed by a status line.
std::string format(const DiagonalizationReport& report);

}  // namespace dialectic
