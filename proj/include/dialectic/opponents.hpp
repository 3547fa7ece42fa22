// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialectic/run.hpp"

namespace dialectic {

/// Finite sets over {ce} + axioms as naturals: bit 0 is ce, bit i+1 is a_i.
struct CodedSet {
    bool ce = false;
    AxiomSet axioms;

    friend bool operator==(const CodedSet&, const CodedSet&) = default;
};

/// Throws kDomain when an axiom index does not fit in 63 bits of code.
std::uint64_t pi_encode(const CodedSet& set);
CodedSet pi_decode(std::uint64_t code);
bool pi_encodable(const AxiomSet& set);

struct OpponentIndex {
    std::uint64_t i0 = 0;
    std::uint64_t i1 = 0;
    std::uint64_t i2 = 0;

    friend bool operator==(const OpponentIndex&, const OpponentIndex&) = default;
};

/// Exponents of 2, 3 and 5 in m. Throws kDomain for m = 0.
OpponentIndex decode_index(std::uint64_t m);

/// Inputs of a fueled evaluation: x is the argument, t the stage for operators.
struct ProgramInput {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint64_t t = 0;
};

/// A fueled partial function. `fuel` is decremented by the work done;
/// nullopt means the budget ran out (or the program diverges).
class Program {
public:
    virtual ~Program() = default;
    virtual std::optional<std::uint64_t> eval(const ProgramInput& in, std::uint64_t& fuel) const = 0;
    /// Non-null for programs given as staged ce rule tables.
    virtual const RuleTable* rules() const { return nullptr; }
    virtual std::string describe() const = 0;
};

/// Parses an expression of the built-in language.
std::unique_ptr<Program> parse_expr_program(std::string_view text);
/// "k:v k:v ... [else <expr>]"; a miss without `else` diverges.
std::unique_ptr<Program> parse_table_program(std::string_view text);
std::unique_ptr<Program> make_rules_program(RuleTable rules);

class ProgramUniverse {
public:
    void add(std::uint64_t index, std::shared_ptr<const Program> program);
    /// Null when absent; an absent index denotes the nowhere-defined function.
    const Program* find(std::uint64_t index) const;
    std::size_t size() const noexcept { return programs_.size(); }

private:
    std::map<std::uint64_t, std::shared_ptr<const Program>> programs_;
};

std::optional<std::uint64_t> evaluate_program(const Program* program, const ProgramInput& in,
                                              std::uint64_t fuel);

struct OpponentSpec {
    std::string name;
    OpponentIndex index;
};

struct OpponentFamily {
    ProgramUniverse universe;
    std::vector<OpponentSpec> opponents;
};

/// Family file:
///   program <k> expr <expression>
///   program <k> table <k:v ...> [else <expression>]
///   program <k> cerules
///     <rule lines>
///   end
///   opponent <name> g=<k> h=<k> r=<k>
///   opponent <name> m=<code>
OpponentFamily parse_family(std::string_view text);

enum class StepOutcome { kProgress, kDiverged, kInvalid };

struct OpponentStepResult {
    StepOutcome outcome = StepOutcome::kProgress;
    /// "g", "H" or "r" for divergence; the reason for invalidity.
    std::string detail;
    std::optional<TraceEvent> event;
};

struct Iterate {
    AxiomId value;
    std::uint64_t e = 0;
};

/// The partial p-dialectical system for (i0, i1, i2) with its own run state.
/// Positions of its string remember the listing index they came from, since
/// r acts on listing indices.
class PartialPSystem {
public:
    PartialPSystem(std::string name, std::shared_ptr<const ProgramUniverse> universe,
                   OpponentIndex index);

    const std::string& name() const noexcept { return name_; }
    const OpponentIndex& index() const noexcept { return index_; }
    const BeliefString& sigma() const noexcept { return sigma_; }
    const std::vector<std::uint64_t>& listing() const noexcept { return listing_; }
    std::uint64_t stage() const noexcept { return stage_; }
    bool invalid() const noexcept { return invalid_.has_value(); }
    const std::optional<std::string>& invalid_reason() const noexcept { return invalid_; }
    const std::optional<std::string>& last_divergence() const noexcept { return diverged_; }
    /// Events tagged with the global stage at which they happened.
    const std::vector<TraceEvent>& history() const noexcept { return history_; }
    std::uint64_t max_mentioned() const noexcept { return max_mentioned_; }

    /// g_n, memoized once converged.
    std::optional<AxiomId> g(std::uint64_t n, std::uint64_t fuel);
    /// Cached g values, in listing order, up to the first unknown one.
    std::size_t g_known() const noexcept { return g_prefix_; }
    AxiomId g_cached(std::size_t n) const { return *g_[n]; }
    /// phi_{i2}(n): the listing index of r(g_n).
    std::optional<std::uint64_t> r_index(std::uint64_t n, std::uint64_t fuel);
    /// Least e with (r)^e(g_n) outside E, following listing indices.
    std::optional<Iterate> r_iterate(std::uint64_t n, const AxiomSet& E, std::uint64_t fuel);
    /// Whether ce is in H(s, X); nullopt on divergence or an unencodable X.
    std::optional<bool> ce_in(std::uint64_t s, const AxiomSet& X, std::uint64_t fuel);

    /// One stage of the p-run at the opponent's own stage counter.
    OpponentStepResult step(std::uint64_t global_stage, std::uint64_t fuel);

private:
    struct Union {
        std::uint64_t next_t = 0;
        /// Least t at which ce showed up, once seen.
        std::optional<std::uint64_t> ce_at;
    };
    std::optional<bool> h_ce(std::uint64_t s, std::uint64_t code, std::uint64_t fuel);
    void note(std::uint64_t index);
    void mark_invalid(std::string reason);

    std::string name_;
    std::shared_ptr<const ProgramUniverse> universe_;
    OpponentIndex index_;
    const Program* g_prog_;
    const Program* h_prog_;
    const Program* r_prog_;

    BeliefString sigma_;
    std::vector<std::uint64_t> listing_;
    TriggerIndex triggers_;
    std::uint64_t stage_ = 0;
    std::vector<std::optional<AxiomId>> g_;
    std::size_t g_prefix_ = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> r_;
    std::unordered_map<std::uint64_t, Union> h_;
    std::vector<TraceEvent> history_;
    std::optional<std::string> invalid_;
    std::optional<std::string> diverged_;
    bool checked_rules_ = false;
    std::uint64_t max_mentioned_ = 0;
};

std::vector<PartialPSystem> instantiate(const OpponentFamily& family);

OpponentStepResult opponent_step(PartialPSystem& theta, std::uint64_t global_stage,
                                 std::uint64_t fuel);
std::optional<Iterate> r_iterate(PartialPSystem& theta, std::uint64_t listing_index,
                                 const AxiomSet& E, std::uint64_t fuel);

}  // namespace dialectic
