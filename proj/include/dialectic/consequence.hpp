// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dialectic/core.hpp"

namespace dialectic {

/// Output symbol of a consequence operator: an axiom, a contradiction (BOT)
/// or a counterexample (CE).
class Symbol {
public:
    enum class Kind : std::uint8_t { kAxiom = 0, kBottom = 1, kCounterExample = 2 };

    static Symbol of(AxiomId id) { return Symbol(Kind::kAxiom, id); }
    static Symbol bottom() { return Symbol(Kind::kBottom, {}); }
    static Symbol counterexample() { return Symbol(Kind::kCounterExample, {}); }

    Kind kind() const noexcept { return kind_; }
    bool is_axiom() const noexcept { return kind_ == Kind::kAxiom; }
    bool is_bottom() const noexcept { return kind_ == Kind::kBottom; }
    bool is_counterexample() const noexcept { return kind_ == Kind::kCounterExample; }
    /// Bottom or counterexample: the two symbols that trigger revision.
    bool is_trigger() const noexcept { return !is_axiom(); }
    AxiomId axiom() const noexcept { return id_; }

    friend auto operator<=>(const Symbol&, const Symbol&) = default;

private:
    Symbol(Kind kind, AxiomId id) : kind_(kind), id_(id) {}
    Kind kind_;
    AxiomId id_;
};

using SymbolSet = std::set<Symbol>;

/// "From stage `stage` on, `premises` yield `conclusion`."
struct ConsequenceRule {
    std::uint64_t stage = 0;
    AxiomSet premises;
    Symbol conclusion = Symbol::bottom();

    friend bool operator==(const ConsequenceRule&, const ConsequenceRule&) = default;
};

/// Finite presentation of an approximated consequence operator H(n, F).
/// Append-only; evaluation at stage n sees the rules with stage <= n.
class RuleTable {
public:
    RuleTable() = default;
    explicit RuleTable(std::vector<ConsequenceRule> rules) : rules_(std::move(rules)) {}

    void append(ConsequenceRule rule) { rules_.push_back(std::move(rule)); }
    const std::vector<ConsequenceRule>& rules() const noexcept { return rules_; }
    std::size_t size() const noexcept { return rules_.size(); }
    bool empty() const noexcept { return rules_.empty(); }

    std::uint64_t max_stage() const;
    /// Largest axiom index in any premise or conclusion, if any.
    std::optional<std::uint64_t> max_axiom_index() const;
    bool has_bottom() const;
    bool has_counterexample() const;

    friend bool operator==(const RuleTable&, const RuleTable&) = default;

private:
    std::vector<ConsequenceRule> rules_;
};

/// H(n, F) = F plus the conclusions of every visible rule whose premises lie in F.
SymbolSet evaluate(const RuleTable& table, std::uint64_t n, const AxiomSet& F);
/// H^inf(F) for the finite presentation: evaluation at the largest rule stage.
SymbolSet limit_closure(const RuleTable& table, const AxiomSet& F);

AxiomSet axioms_of(const SymbolSet& symbols);
bool contains_bottom(const SymbolSet& symbols);
bool contains_counterexample(const SymbolSet& symbols);

struct Violation {
    enum class Kind { kInclusion, kStageMonotony, kSetMonotony, kIteration };
    Kind kind;
    std::uint64_t stage = 0;
    AxiomSet witness;
    AxiomSet other;  // the larger set for set-monotony failures
    std::string detail;
};

const char* to_string(Violation::Kind kind);

struct ValidationReport {
    bool passed = true;
    /// True when no rule concludes an axiom, so H^inf(F) restricted to axioms
    /// is F itself and Iteration holds without enumeration.
    bool structural_iteration = false;
    std::size_t subsets_checked = 0;
    std::vector<Violation> violations;  // capped at kMaxViolations
    static constexpr std::size_t kMaxViolations = 16;
};

/// Checks inclusion, monotony in stage and set, and Iteration over every
/// F within {a_0..a_bound} with |F| <= width. Throws kValidationScope when
/// the table mentions an axiom above `bound`.
ValidationReport validate_aco(const RuleTable& table, std::uint64_t bound, std::size_t width = 4);

std::string format(const ValidationReport& report);

/// Materializes the transitive closure of an arbitrary table: every derivable
/// (premise set, conclusion) pair becomes a rule, visible once all rules it
/// uses are visible. The result satisfies Iteration.
RuleTable close_table(const RuleTable& table);

struct HornRule {
    AxiomSet premises;
    AxiomId conclusion;
};

/// Builds a Tarskian table from Horn rules and conflict sets. Derived facts are
/// staged at their derivation depth; conflicts yield BOT rules.
RuleTable from_horn(const std::vector<AxiomId>& items, const std::vector<HornRule>& horn_rules,
                    const std::vector<AxiomSet>& conflicts);

/// Revision by one externally given truth b: H(n,F) = H'(n, F + {b}) restricted
/// to K plus BOT, realized by dropping b from premises and filtering conclusions.
RuleTable revision_operator(const RuleTable& base, const AxiomSet& K, AxiomId b);

/// Like revision_operator, but stream item i is injected from stage i on.
RuleTable stream_revision_operator(const RuleTable& base, const AxiomSet& K,
                                   const std::vector<AxiomId>& stream);

std::string format_symbol(const Symbol& s);
std::string format(const SymbolSet& set);
Symbol parse_symbol(std::string_view text);

/// One rule per line: "at <stage> : <premises> |- <symbol>".
std::string format_rule(const ConsequenceRule& rule);
std::string format(const RuleTable& table);
/// Accepts blank lines and '#' comments. `first_line` offsets diagnostics when
/// the table is embedded in a larger file.
RuleTable parse_rule_table(std::string_view text, std::size_t first_line = 1);
ConsequenceRule parse_rule_line(std::string_view line, std::size_t line_no);

}  // namespace dialectic
