// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/consequence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "dialectic/error.hpp"
#include "text_util.hpp"

namespace dialectic {

std::uint64_t RuleTable::max_stage() const {
    std::uint64_t out = 0;
    for (const auto& r : rules_) out = std::max(out, r.stage);
    return out;
}

std::optional<std::uint64_t> RuleTable::max_axiom_index() const {
    std::optional<std::uint64_t> out;
    auto bump = [&](AxiomId id) { out = out ? std::max(*out, id.index) : id.index; };
    for (const auto& r : rules_) {
        for (AxiomId p : r.premises) bump(p);
        if (r.conclusion.is_axiom()) bump(r.conclusion.axiom());
    }
    return out;
}

bool RuleTable::has_bottom() const {
    return std::any_of(rules_.begin(), rules_.end(),
                       [](const auto& r) { return r.conclusion.is_bottom(); });
}

bool RuleTable::has_counterexample() const {
    return std::any_of(rules_.begin(), rules_.end(),
                       [](const auto& r) { return r.conclusion.is_counterexample(); });
}

SymbolSet evaluate(const RuleTable& table, std::uint64_t n, const AxiomSet& F) {
    SymbolSet out;
    for (AxiomId x : F) out.insert(Symbol::of(x));
    for (const auto& rule : table.rules()) {
        if (rule.stage > n) continue;
        if (std::includes(F.begin(), F.end(), rule.premises.begin(), rule.premises.end())) {
            out.insert(rule.conclusion);
        }
    }
    return out;
}

SymbolSet limit_closure(const RuleTable& table, const AxiomSet& F) {
    return evaluate(table, table.max_stage(), F);
}

AxiomSet axioms_of(const SymbolSet& symbols) {
    AxiomSet out;
    for (const Symbol& s : symbols) {
        if (s.is_axiom()) out.insert(s.axiom());
    }
    return out;
}

bool contains_bottom(const SymbolSet& symbols) { return symbols.count(Symbol::bottom()) != 0; }

bool contains_counterexample(const SymbolSet& symbols) {
    return symbols.count(Symbol::counterexample()) != 0;
}

const char* to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::kInclusion: return "inclusion";
        case Violation::Kind::kStageMonotony: return "stage-monotony";
        case Violation::Kind::kSetMonotony: return "set-monotony";
        case Violation::Kind::kIteration: return "iteration";
    }
    return "unknown";
}

namespace {

bool subset_of(const SymbolSet& a, const SymbolSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Calls fn on every subset of {0..bound} with at most `width` elements, by
// increasing size and then lexicographically.
void for_each_subset(std::uint64_t bound, std::size_t width,
                     const std::function<void(const AxiomSet&)>& fn) {
    const std::uint64_t n = bound + 1;
    for (std::size_t size = 0; size <= width && size <= n; ++size) {
        std::vector<std::uint64_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            AxiomSet F;
            for (auto i : idx) F.insert(AxiomId{i});
            fn(F);
            // next combination
            std::size_t pos = size;
            while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

ValidationReport validate_aco(const RuleTable& table, std::uint64_t bound, std::size_t width) {
    if (auto mx = table.max_axiom_index(); mx && *mx > bound) {
        throw Error(ErrorCode::kValidationScope,
                    "bound " + std::to_string(bound) + " is below the largest mentioned axiom a" +
                        std::to_string(*mx));
    }
    ValidationReport report;
    report.structural_iteration = std::none_of(
        table.rules().begin(), table.rules().end(),
        [](const auto& r) { return r.conclusion.is_axiom(); });

    // Evaluation only changes at rule stages, so those are the stages worth probing.
    std::set<std::uint64_t> stage_set{0};
    for (const auto& r : table.rules()) stage_set.insert(r.stage);
    const std::vector<std::uint64_t> stages(stage_set.begin(), stage_set.end());

    auto record = [&](Violation v) {
        report.passed = false;
        if (report.violations.size() < ValidationReport::kMaxViolations) {
            report.violations.push_back(std::move(v));
        }
    };

    for_each_subset(bound, width, [&](const AxiomSet& F) {
        ++report.subsets_checked;
        SymbolSet as_symbols;
        for (AxiomId x : F) as_symbols.insert(Symbol::of(x));
        std::optional<SymbolSet> previous;
        for (std::uint64_t n : stages) {
            SymbolSet value = evaluate(table, n, F);
            if (!subset_of(as_symbols, value)) {
                record({Violation::Kind::kInclusion, n, F, {}, "F not contained in H(n,F)"});
            }
            if (previous && !subset_of(*previous, value)) {
                record({Violation::Kind::kStageMonotony, n, F, {}, "H(n-1,F) not contained in H(n,F)"});
            }
            for (std::uint64_t x = 0; x <= bound && F.size() < width; ++x) {
                if (F.count(AxiomId{x})) continue;
                AxiomSet G = F;
                G.insert(AxiomId{x});
                if (!subset_of(value, evaluate(table, n, G))) {
                    record({Violation::Kind::kSetMonotony, n, F, G, "H(n,F) not contained in H(n,G)"});
                }
            }
            previous = std::move(value);
        }
        if (!report.structural_iteration) {
            SymbolSet closure = limit_closure(table, F);
            SymbolSet again = limit_closure(table, axioms_of(closure));
            if (again != closure) {
                record({Violation::Kind::kIteration, table.max_stage(), F, axioms_of(closure),
                        "H(H(F) & A) = " + format(again) + " but H(F) = " + format(closure)});
            }
        }
    });
    return report;
}

std::string format(const ValidationReport& report) {
    std::ostringstream out;
    out << (report.passed ? "PASS" : "FAIL") << " subsets=" << report.subsets_checked;
    if (report.structural_iteration) out << " iteration=structural";
    out << '\n';
    for (const auto& v : report.violations) {
        out << "violation " << to_string(v.kind) << " stage=" << v.stage
            << " witness=" << format(v.witness);
        if (!v.other.empty()) out << " other=" << format(v.other);
        out << " : " << v.detail << '\n';
    }
    return out.str();
}

namespace {

// A derivation of a symbol: the axioms it rests on and the stage from which
// it is visible.
struct Support {
    AxiomSet premises;
    std::uint64_t stage;
};

// Pareto set of supports: no element is dominated by another with a subset
// of premises and an equal or earlier stage.
class Label {
public:
    bool insert(Support s) {
        for (const auto& e : supports_) {
            if (e.stage <= s.stage &&
                std::includes(s.premises.begin(), s.premises.end(), e.premises.begin(),
                              e.premises.end())) {
                return false;
            }
        }
        std::erase_if(supports_, [&](const Support& e) {
            return s.stage <= e.stage && std::includes(e.premises.begin(), e.premises.end(),
                                                       s.premises.begin(), s.premises.end());
        });
        supports_.push_back(std::move(s));
        return true;
    }
    const std::vector<Support>& supports() const { return supports_; }

private:
    std::vector<Support> supports_;
};

struct StagedRule {
    std::uint64_t stage;
    AxiomSet premises;
    Symbol conclusion;
};

using Combine = std::function<std::uint64_t(std::uint64_t rule_stage, std::uint64_t support_stage)>;

constexpr std::size_t kMaxSupports = 200000;

// Forward chaining over supports (an ATMS-style label computation). Labels of
// axioms start with the trivial support {x} at stage 0.
RuleTable materialize(const std::vector<StagedRule>& rules, const Combine& combine) {
    std::map<Symbol, Label> labels;
    auto label_of = [&](AxiomId x) -> Label& {
        auto [it, fresh] = labels.try_emplace(Symbol::of(x));
        if (fresh) it->second.insert(Support{AxiomSet{x}, 0});
        return it->second;
    };
    for (const auto& r : rules) {
        for (AxiomId p : r.premises) label_of(p);
        if (r.conclusion.is_axiom()) label_of(r.conclusion.axiom());
    }

    std::size_t total = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : rules) {
            std::vector<const Label*> parts;
            for (AxiomId p : rule.premises) parts.push_back(&label_of(p));
            // cartesian product over the premises' supports
            std::vector<Support> combos{Support{{}, 0}};
            for (const Label* part : parts) {
                std::vector<Support> next;
                for (const auto& acc : combos) {
                    for (const auto& s : part->supports()) {
                        Support merged{acc.premises, std::max(acc.stage, s.stage)};
                        merged.premises.insert(s.premises.begin(), s.premises.end());
                        next.push_back(std::move(merged));
                    }
                }
                combos = std::move(next);
                if (combos.size() > kMaxSupports) {
                    throw Error(ErrorCode::kDomain, "rule closure exceeds the support budget");
                }
            }
            Label& target = labels[rule.conclusion];
            if (rule.conclusion.is_axiom() && target.supports().empty()) {
                target.insert(Support{AxiomSet{rule.conclusion.axiom()}, 0});
            }
            for (auto& c : combos) {
                if (rule.conclusion.is_axiom() && c.premises.count(rule.conclusion.axiom())) continue;
                c.stage = combine(rule.stage, c.stage);
                if (target.insert(std::move(c))) {
                    changed = true;
                    if (++total > kMaxSupports) {
                        throw Error(ErrorCode::kDomain, "rule closure exceeds the support budget");
                    }
                }
            }
        }
    }

    std::vector<ConsequenceRule> out;
    for (const auto& [symbol, label] : labels) {
        std::vector<Support> supports = label.supports();
        std::sort(supports.begin(), supports.end(), [](const Support& a, const Support& b) {
            return std::tie(a.premises, a.stage) < std::tie(b.premises, b.stage);
        });
        for (const auto& s : supports) {
            if (symbol.is_axiom() && s.premises.count(symbol.axiom())) continue;  // inclusion
            out.push_back(ConsequenceRule{s.stage, s.premises, symbol});
        }
    }
    return RuleTable(std::move(out));
}

}  // namespace

RuleTable close_table(const RuleTable& table) {
    std::vector<StagedRule> rules;
    for (const auto& r : table.rules()) rules.push_back({r.stage, r.premises, r.conclusion});
    return materialize(rules, [](std::uint64_t rule_stage, std::uint64_t support_stage) {
        return std::max(rule_stage, support_stage);
    });
}

RuleTable from_horn(const std::vector<AxiomId>& items, const std::vector<HornRule>& horn_rules,
                    const std::vector<AxiomSet>& conflicts) {
    const AxiomSet declared(items.begin(), items.end());
    auto check = [&](AxiomId x, const char* where) {
        if (!declared.count(x)) {
            throw Error(ErrorCode::kSchema,
                        std::string(where) + " references undeclared item " + format_axiom(x));
        }
    };
    std::vector<StagedRule> rules;
    for (const auto& h : horn_rules) {
        for (AxiomId p : h.premises) check(p, "rule");
        check(h.conclusion, "rule");
        rules.push_back({1, h.premises, Symbol::of(h.conclusion)});
    }
    for (const auto& c : conflicts) {
        for (AxiomId p : c) check(p, "conflict");
        rules.push_back({0, c, Symbol::bottom()});
    }
    // Depth staging: a direct Horn step costs one stage, a conflict none.
    return materialize(rules, [](std::uint64_t rule_stage, std::uint64_t support_stage) {
        return rule_stage + support_stage;
    });
}

RuleTable revision_operator(const RuleTable& base, const AxiomSet& K, AxiomId b) {
    if (K.count(b)) {
        throw Error(ErrorCode::kDomain, "revision input " + format_axiom(b) + " already in K");
    }
    RuleTable out;
    for (const auto& r : base.rules()) {
        const bool keep = r.conclusion.is_bottom() ||
                          (r.conclusion.is_axiom() && K.count(r.conclusion.axiom()));
        if (!keep) continue;
        ConsequenceRule rewritten = r;
        rewritten.premises.erase(b);
        out.append(std::move(rewritten));
    }
    return out;
}

RuleTable stream_revision_operator(const RuleTable& base, const AxiomSet& K,
                                   const std::vector<AxiomId>& stream) {
    std::map<AxiomId, std::uint64_t> first_stage;
    for (std::uint64_t i = 0; i < stream.size(); ++i) {
        if (K.count(stream[i])) {
            throw Error(ErrorCode::kDomain, "stream item " + format_axiom(stream[i]) + " already in K");
        }
        first_stage.try_emplace(stream[i], i);
    }
    RuleTable out;
    for (const auto& r : base.rules()) {
        const bool keep = r.conclusion.is_bottom() ||
                          (r.conclusion.is_axiom() && K.count(r.conclusion.axiom()));
        if (!keep) continue;
        ConsequenceRule rewritten{r.stage, {}, r.conclusion};
        for (AxiomId p : r.premises) {
            if (auto it = first_stage.find(p); it != first_stage.end()) {
                rewritten.stage = std::max(rewritten.stage, it->second);
            } else {
                rewritten.premises.insert(p);
            }
        }
        out.append(std::move(rewritten));
    }
    return out;
}

std::string format_symbol(const Symbol& s) {
    if (s.is_bottom()) return "BOT";
    if (s.is_counterexample()) return "CE";
    return format_axiom(s.axiom());
}

std::string format(const SymbolSet& set) {
    std::string out = "{";
    bool first = true;
    for (const Symbol& s : set) {
        if (!first) out += ',';
        first = false;
        out += format_symbol(s);
    }
    return out + "}";
}

Symbol parse_symbol(std::string_view text) {
    if (text == "BOT") return Symbol::bottom();
    if (text == "CE") return Symbol::counterexample();
    return Symbol::of(parse_axiom(text));
}

std::string format_rule(const ConsequenceRule& rule) {
    std::string out = "at " + std::to_string(rule.stage) + " :";
    for (AxiomId p : rule.premises) out += " " + format_axiom(p);
    out += " |- " + format_symbol(rule.conclusion);
    return out;
}

std::string format(const RuleTable& table) {
    std::string out;
    for (const auto& r : table.rules()) out += format_rule(r) + "\n";
    return out;
}

ConsequenceRule parse_rule_line(std::string_view line, std::size_t line_no) {
    const auto words = detail::split_words(line);
    auto fail = [&](std::size_t column, const std::string& msg) -> ParseError {
        return ParseError(line_no, column, msg);
    };
    if (words.size() < 4 || words[0].text != "at") {
        throw fail(words.empty() ? 1 : words[0].column, "expected 'at <stage> : <premises> |- <symbol>'");
    }
    ConsequenceRule rule;
    if (!detail::parse_u64(words[1].text, rule.stage)) throw fail(words[1].column, "bad stage");
    if (words[2].text != ":") throw fail(words[2].column, "expected ':'");
    std::size_t i = 3;
    for (; i < words.size() && words[i].text != "|-"; ++i) {
        try {
            rule.premises.insert(parse_axiom(words[i].text));
        } catch (const Error&) {
            throw fail(words[i].column, "bad premise '" + std::string(words[i].text) + "'");
        }
    }
    if (i == words.size()) throw fail(line.size() + 1, "missing '|-'");
    if (i + 2 != words.size()) throw fail(words[i].column, "expected exactly one symbol after '|-'");
    try {
        rule.conclusion = parse_symbol(words[i + 1].text);
    } catch (const Error&) {
        throw fail(words[i + 1].column, "bad symbol '" + std::string(words[i + 1].text) + "'");
    }
    return rule;
}

RuleTable parse_rule_table(std::string_view text, std::size_t first_line) {
    RuleTable table;
    const auto lines = detail::logical_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::split_ws(lines[i]).empty()) continue;
        table.append(parse_rule_line(lines[i], first_line + i));
    }
    return table;
}

}  // namespace dialectic
