// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/applications.hpp"

#include <algorithm>
#include <cctype>

#include "dialectic/error.hpp"
#include "text_util.hpp"

namespace dialectic {

std::vector<AxiomId> KnowledgeBase::items() const {
    std::vector<AxiomId> out;
    for (std::size_t i = 0; i < names.size(); ++i) out.push_back(AxiomId{i});
    return out;
}

AxiomSet KnowledgeBase::item_set() const {
    auto v = items();
    return AxiomSet(v.begin(), v.end());
}

std::optional<AxiomId> KnowledgeBase::find(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return AxiomId{static_cast<std::uint64_t>(it - names.begin())};
}

const std::string& KnowledgeBase::name_of(AxiomId id) const {
    if (id.index >= names.size()) {
        throw Error(ErrorCode::kOutOfRange, format_axiom(id) + " is not an item");
    }
    return names[id.index];
}

namespace {

bool valid_name(std::string_view w) {
    if (w.empty() || w == "->") return false;
    return std::all_of(w.begin(), w.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

void parse_into(KnowledgeBase& kb, std::string_view text) {
    const auto lines = detail::logical_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto words = detail::split_words(lines[ln]);
        if (words.empty()) continue;
        const std::size_t line = ln + 1;
        auto fail = [&](const detail::Word& w, const std::string& msg) -> ParseError {
            return ParseError(line, w.column, msg);
        };
        auto lookup = [&](const detail::Word& w) {
            auto id = kb.find(w.text);
            if (!id) throw fail(w, "unknown item '" + std::string(w.text) + "'");
            return *id;
        };
        // Splits "<names> -> <name>" starting at word 1.
        auto arrow = [&]() {
            std::size_t pos = 0;
            for (std::size_t i = 1; i < words.size(); ++i) {
                if (words[i].text == "->") pos = i;
            }
            if (pos == 0 || pos + 2 != words.size()) {
                throw fail(words[0], "expected '<names> -> <name>'");
            }
            return pos;
        };
        const std::string_view head = words[0].text;
        if (head == "item") {
            if (words.size() != 2 || !valid_name(words[1].text)) {
                throw fail(words[0], "expected 'item <name>'");
            }
            if (kb.find(words[1].text)) {
                throw fail(words[1], "duplicate item '" + std::string(words[1].text) + "'");
            }
            kb.names.emplace_back(words[1].text);
        } else if (head == "rule") {
            const std::size_t pos = arrow();
            HornRule r;
            for (std::size_t i = 1; i < pos; ++i) r.premises.insert(lookup(words[i]));
            r.conclusion = lookup(words[pos + 1]);
            kb.horn_rules.push_back(std::move(r));
        } else if (head == "conflict") {
            if (words.size() < 2) throw fail(words[0], "conflict needs at least one item");
            AxiomSet c;
            for (std::size_t i = 1; i < words.size(); ++i) c.insert(lookup(words[i]));
            kb.conflicts.push_back(std::move(c));
        } else if (head == "replace") {
            const std::size_t pos = arrow();
            if (pos != 2) throw fail(words[0], "expected 'replace <name> -> <name>'");
            const AxiomId from = lookup(words[1]);
            if (!kb.hints.emplace(from, lookup(words[3])).second) {
                throw fail(words[1], "second hint for '" + std::string(words[1].text) + "'");
            }
        } else {
            throw fail(words[0], "unknown directive '" + std::string(head) + "'");
        }
    }
}

std::string join_names(const KnowledgeBase& kb, const AxiomSet& set) {
    std::string out;
    for (AxiomId a : set) {
        out += ' ';
        out += kb.name_of(a);
    }
    return out;
}

RunTrace run_table(const RuleTable& table, ReplacementMap r, std::uint64_t horizon) {
    return run(QSystem(table, std::move(r)), horizon);
}

void partition(RepairResult& res, const AxiomSet& K, std::uint64_t window) {
    res.stability = estimate_beliefs(res.trace, window);
    res.stable = res.stability.clean_window;
    const AxiomSet held = range(res.trace.final_sigma);
    for (AxiomId a : K) (held.count(a) ? res.kept : res.removed).insert(a);
}

void check_horizon(std::uint64_t horizon, std::size_t items) {
    if (horizon < items) {
        throw Error(ErrorCode::kDomain, "horizon " + std::to_string(horizon) +
                                            " is shorter than the " + std::to_string(items) +
                                            " items");
    }
}

}  // namespace

KnowledgeBase parse_kb(std::string_view text) {
    KnowledgeBase kb;
    parse_into(kb, text);
    return kb;
}

KnowledgeBase parse_kb_extension(const KnowledgeBase& base, std::string_view text) {
    KnowledgeBase kb = base;
    kb.first_item = base.size();
    parse_into(kb, text);
    return kb;
}

std::string format(const KnowledgeBase& kb) {
    std::string out;
    for (const auto& n : kb.names) out += "item " + n + "\n";
    for (const auto& r : kb.horn_rules) {
        out += "rule" + join_names(kb, r.premises) + " -> " + kb.name_of(r.conclusion) + "\n";
    }
    for (const auto& c : kb.conflicts) out += "conflict" + join_names(kb, c) + "\n";
    for (auto [from, to] : kb.hints) {
        out += "replace " + kb.name_of(from) + " -> " + kb.name_of(to) + "\n";
    }
    return out;
}

RuleTable kb_table(const KnowledgeBase& kb, RepairMode mode) {
    RuleTable t = from_horn(kb.items(), kb.horn_rules, kb.conflicts);
    if (mode == RepairMode::kD) return t;
    RuleTable out;
    for (auto r : t.rules()) {
        if (r.conclusion.is_bottom() && !r.premises.empty() && kb.hints.count(*r.premises.rbegin())) {
            r.conclusion = Symbol::counterexample();
        }
        out.append(std::move(r));
    }
    return out;
}

RepairResult repair(const KnowledgeBase& kb, std::uint64_t horizon, std::uint64_t window,
                    RepairMode mode) {
    check_horizon(horizon, kb.size());
    RepairResult res;
    res.table = kb_table(kb, mode);
    ReplacementMap r;
    if (mode == RepairMode::kQ) {
        for (auto [from, to] : kb.hints) r.insert(from, to);
    }
    res.trace = run_table(res.table, std::move(r), horizon);
    partition(res, kb.item_set(), window);
    return res;
}

RevisionResult revise(const KnowledgeBase& kb, const KnowledgeBase& input, std::uint64_t horizon,
                      std::uint64_t window) {
    if (input.first_item != kb.size() || input.size() != kb.size() + 1) {
        throw Error(ErrorCode::kDomain, "revision input must declare exactly one new item");
    }
    check_horizon(horizon, kb.size());
    const AxiomId b{kb.size()};
    const RuleTable base = kb_table(input);
    RevisionResult res;
    res.accepted = {b};
    if (contains_bottom(limit_closure(base, AxiomSet{b}))) {
        res.rejected = true;
        return res;
    }
    res.table = revision_operator(base, kb.item_set(), b);
    res.trace = run_table(res.table, ReplacementMap{}, horizon);
    partition(res, kb.item_set(), window);
    return res;
}

RevisionResult revise_stream(const KnowledgeBase& kb, const KnowledgeBase& stream,
                             std::uint64_t horizon, std::uint64_t window) {
    if (stream.first_item != kb.size()) {
        throw Error(ErrorCode::kDomain, "stream must extend the knowledge base");
    }
    check_horizon(horizon, kb.size());
    const RuleTable base = kb_table(stream);
    RevisionResult res;
    for (std::size_t i = kb.size(); i < stream.size(); ++i) res.accepted.push_back(AxiomId{i});
    const AxiomSet injected(res.accepted.begin(), res.accepted.end());
    if (contains_bottom(limit_closure(base, injected))) {
        res.inconsistent_input = true;
        return res;
    }
    res.table = stream_revision_operator(base, kb.item_set(), res.accepted);
    res.trace = run_table(res.table, ReplacementMap{}, horizon);
    partition(res, kb.item_set(), window);
    return res;
}

std::string format(const KnowledgeBase& kb, const RepairResult& result) {
    std::string out = std::string("status=") + (result.stable ? "stable" : "unstable") + "\n";
    out += "kept:" + join_names(kb, result.kept) + "\n";
    out += "removed:" + join_names(kb, result.removed) + "\n";
    return out;
}

std::string format(const KnowledgeBase& kb, const RevisionResult& result) {
    std::string out;
    if (result.rejected) {
        out = "status=rejected-input\n";
    } else if (result.inconsistent_input) {
        out = "status=inconsistent-input\n";
    } else {
        out = format(kb, static_cast<const RepairResult&>(result));
    }
    out += "accepted:";
    for (AxiomId a : result.accepted) out += " " + kb.name_of(a);
    return out + "\n";
}

}  // namespace dialectic
