// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialectic/consequence.hpp"
#include "dialectic/core.hpp"

namespace dialectic {

/// Partial replacement function r, checked for cycles on every insert.
class ReplacementMap {
public:
    static constexpr std::size_t kDefaultDepth = 64;

    explicit ReplacementMap(std::size_t certificate_depth = kDefaultDepth)
        : depth_(certificate_depth) {}

    /// Defines r(from) = to. Throws kCyclicReplacement if r^n(from) == from for
    /// some 1 <= n <= depth, or kDomain when `from` is already defined
    /// differently.
    void insert(AxiomId from, AxiomId to);
    /// Permits the 2-cycle {a, b}; nothing else may close a loop.
    void allow_two_cycle(AxiomId a, AxiomId b);

    std::optional<AxiomId> at(AxiomId from) const;
    bool defined(AxiomId from) const { return map_.count(from) != 0; }
    std::size_t size() const noexcept { return map_.size(); }
    std::size_t certificate_depth() const noexcept { return depth_; }
    const std::map<AxiomId, AxiomId>& entries() const noexcept { return map_; }
    /// Least k with r(a_k) undefined.
    std::uint64_t least_undefined() const;
    std::optional<std::uint64_t> max_index() const;

    friend bool operator==(const ReplacementMap& a, const ReplacementMap& b) {
        return a.map_ == b.map_;
    }

private:
    std::size_t depth_;
    std::map<AxiomId, AxiomId> map_;
    std::set<std::pair<AxiomId, AxiomId>> allowed_cycles_;
};

/// A q-dialectical system over the canonical listing a_0, a_1, ...
class QSystem {
public:
    /// Throws kRejectedTable if BOT or CE is derivable from the empty set.
    QSystem(RuleTable table, ReplacementMap replacement);
    QSystem() = default;

    const RuleTable& table() const noexcept { return table_; }
    const ReplacementMap& replacement() const noexcept { return replacement_; }
    RuleTable& mutable_table() noexcept { return table_; }
    ReplacementMap& mutable_replacement() noexcept { return replacement_; }

    /// Re-checks the load-time rejection rule for a rule about to be appended.
    void append_rule(ConsequenceRule rule);

private:
    RuleTable table_;
    ReplacementMap replacement_;
};

void check_loadable(const RuleTable& table);

struct TraceEvent {
    enum class Kind : std::uint8_t { kExpansion, kExcision, kReplacement };

    /// Stage s whose operator H(s, .) produced sigma_{s+1}.
    std::uint64_t stage = 0;
    Kind kind = Kind::kExpansion;
    /// Least trigger index (1-based prefix length); 0 for expansions.
    std::size_t k = 0;
    /// Excision/replacement: the axiom removed at position k-1.
    std::optional<AxiomId> old_axiom;
    /// Expansion: the appended axiom; replacement: r(old).
    std::optional<AxiomId> new_axiom;
    std::size_t length_after = 0;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

const char* to_string(TraceEvent::Kind kind);

/// Applies one event to the stage-s string, yielding the stage-(s+1) string.
void apply_event(BeliefString& sigma, const TraceEvent& event);

/// The run history. Strings are not stored per stage; `sigma_at` and
/// `for_each_sigma` rebuild them by replaying the events.
struct RunTrace {
    std::vector<TraceEvent> events;
    std::uint64_t horizon = 0;
    BeliefString final_sigma;

    BeliefString sigma_at(std::uint64_t stage) const;
    /// Calls fn(s, sigma_s) for s = 0..horizon.
    void for_each_sigma(const std::function<void(std::uint64_t, const BeliefString&)>& fn) const;
};

/// Result of locating the least trigger index.
struct Trigger {
    std::size_t k = 0;
    bool bottom = false;
};

/// Incremental least-k search over a growing string: keeps the first position
/// of each axiom so the cost per stage is linear in the visible rules.
class TriggerIndex {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void push(Token t);
    void truncate(std::size_t length, const BeliefString& before);
    std::size_t first_position(AxiomId id) const;

    /// Least k in 1..|sigma| such that BOT or CE lies in H(stage, range(sigma|k)),
    /// BOT winning ties at the same k.
    std::optional<Trigger> find(const RuleTable& table, std::uint64_t stage) const;

private:
    std::vector<std::vector<std::size_t>> positions_;
    std::size_t length_ = 0;
};

/// One stage of the run recursion.
std::pair<BeliefString, TraceEvent> step(const QSystem& system, const BeliefString& sigma,
                                         std::uint64_t s);

/// Stateful runner used by `run` and the diagonalizer: same semantics as
/// `step`, amortized O(rules) per stage.
class Runner {
public:
    Runner() = default;

    const BeliefString& sigma() const noexcept { return sigma_; }
    std::uint64_t stage() const noexcept { return stage_; }
    TraceEvent advance(const QSystem& system);

private:
    BeliefString sigma_;
    TriggerIndex index_;
    std::uint64_t stage_ = 0;
};

/// Runs `horizon` stages from the empty string.
RunTrace run(const QSystem& system, std::uint64_t horizon);

struct PositionInfo {
    Token last = Token::gap();
    std::uint64_t last_change = 0;
    bool revised_in_window = false;
};

struct StabilityReport {
    std::uint64_t horizon = 0;
    std::uint64_t window = 0;
    std::vector<PositionInfo> positions;  // one per position of the final string
    std::size_t stable_prefix_length = 0;
    AxiomSet belief_estimate;
    std::set<std::size_t> loop_suspects;
    /// No contraction of any kind inside the final window.
    bool clean_window = false;
};

/// Window-based estimate of the positionwise limit.
StabilityReport estimate_beliefs(const RunTrace& trace, std::uint64_t window);
/// Same, for histories recorded at arbitrary (increasing) stages.
StabilityReport estimate_beliefs(std::span<const TraceEvent> events, std::uint64_t horizon,
                                 std::uint64_t window);

enum class Variant { kD, kP, kQ };

struct VariantInfo {
    Variant variant = Variant::kD;
    bool is_d = true;  // no CE anywhere
    bool is_p = true;  // no BOT anywhere
};

const char* to_string(Variant v);
Variant parse_variant(std::string_view text);
VariantInfo classify_variant(const QSystem& system);

/// `<stage>\t<EXP|EXC|REP>\t<k|->\t<old|->\t<new|->\t<sigma tokens>` per line.
std::string format_trace(const RunTrace& trace);
void write_trace(const RunTrace& trace, std::ostream& out);
std::string format(const StabilityReport& report);

}  // namespace dialectic
