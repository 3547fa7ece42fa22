// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialectic/consequence.hpp"
#include "dialectic/run.hpp"

namespace dialectic {

/// Items are a_0, a_1, ... in file order; earlier means more entrenched.
struct KnowledgeBase {
    std::vector<std::string> names;
    std::vector<HornRule> horn_rules;
    std::vector<AxiomSet> conflicts;
    /// Replacement hints, used only in q mode.
    std::map<AxiomId, AxiomId> hints;
    /// Items below this index belong to a base KB this one extends.
    std::size_t first_item = 0;

    std::size_t size() const noexcept { return names.size(); }
    std::vector<AxiomId> items() const;
    AxiomSet item_set() const;
    std::optional<AxiomId> find(std::string_view name) const;
    const std::string& name_of(AxiomId id) const;
};

/// Lines: `item <name>`, `rule <names> -> <name>`, `conflict <names>`,
/// `replace <name> -> <name>`. '#' starts a comment.
KnowledgeBase parse_kb(std::string_view text);
/// Parses new items that may refer to `base`. They are numbered after it and
/// the result carries base's names too, so `find` covers both.
KnowledgeBase parse_kb_extension(const KnowledgeBase& base, std::string_view text);
std::string format(const KnowledgeBase& kb);

enum class RepairMode { kD, kQ };

struct RepairResult {
    AxiomSet kept;
    AxiomSet removed;
    StabilityReport stability;
    RunTrace trace;
    RuleTable table;
    /// No contraction in the final window.
    bool stable = false;
};

struct RevisionResult : RepairResult {
    /// The injected items, in order.
    std::vector<AxiomId> accepted;
    /// revise only: b derives BOT on its own, nothing was run.
    bool rejected = false;
    /// revise_stream only: the injected items are jointly inconsistent.
    bool inconsistent_input = false;
};

/// Conflicts become BOT rules. In q mode a conflict whose least entrenched
/// premise has a hint concludes CE instead, and the hints form r.
RuleTable kb_table(const KnowledgeBase& kb, RepairMode mode = RepairMode::kD);

RepairResult repair(const KnowledgeBase& kb, std::uint64_t horizon, std::uint64_t window,
                    RepairMode mode = RepairMode::kD);

/// `input` comes from parse_kb_extension(kb, ...) and declares one item.
RevisionResult revise(const KnowledgeBase& kb, const KnowledgeBase& input, std::uint64_t horizon,
                      std::uint64_t window);

/// Item i of `stream` is injected from stage i on.
RevisionResult revise_stream(const KnowledgeBase& kb, const KnowledgeBase& stream,
                             std::uint64_t horizon, std::uint64_t window);

/// `status=...`, then `kept:` and `removed:` lines with item names. For a
/// revision, pass the input or stream KB so the injected items have names.
std::string format(const KnowledgeBase& kb, const RepairResult& result);
std::string format(const KnowledgeBase& kb, const RevisionResult& result);

}  // namespace dialectic
