// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/opponents.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dialectic/error.hpp"
#include "text_util.hpp"

namespace dialectic {

namespace {

constexpr std::uint64_t kMaxCodedAxiom = 62;

}  // namespace

bool pi_encodable(const AxiomSet& set) {
    return set.empty() || set.rbegin()->index <= kMaxCodedAxiom;
}

std::uint64_t pi_encode(const CodedSet& set) {
    if (!pi_encodable(set.axioms)) {
        throw Error(ErrorCode::kDomain,
                    format_axiom(*set.axioms.rbegin()) + " is outside the code range");
    }
    std::uint64_t code = set.ce ? 1 : 0;
    for (AxiomId a : set.axioms) code |= std::uint64_t{1} << (a.index + 1);
    return code;
}

CodedSet pi_decode(std::uint64_t code) {
    CodedSet out;
    out.ce = (code & 1) != 0;
    for (std::uint64_t i = 0; i <= kMaxCodedAxiom; ++i) {
        if (code & (std::uint64_t{1} << (i + 1))) out.axioms.insert(AxiomId{i});
    }
    return out;
}

OpponentIndex decode_index(std::uint64_t m) {
    if (m == 0) throw Error(ErrorCode::kDomain, "opponent code must be at least 1");
    auto exponent = [&m](std::uint64_t p) {
        std::uint64_t e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        return e;
    };
    OpponentIndex out;
    out.i0 = exponent(2);
    out.i1 = exponent(3);
    out.i2 = exponent(5);
    return out;
}

void ProgramUniverse::add(std::uint64_t index, std::shared_ptr<const Program> program) {
    if (!programs_.emplace(index, std::move(program)).second) {
        throw Error(ErrorCode::kSchema, "program " + std::to_string(index) + " defined twice");
    }
}

const Program* ProgramUniverse::find(std::uint64_t index) const {
    auto it = programs_.find(index);
    return it == programs_.end() ? nullptr : it->second.get();
}

std::optional<std::uint64_t> evaluate_program(const Program* program, const ProgramInput& in,
                                              std::uint64_t fuel) {
    if (program == nullptr) return std::nullopt;
    return program->eval(in, fuel);
}

OpponentFamily parse_family(std::string_view text) {
    OpponentFamily family;
    const auto lines = detail::logical_lines(text);
    std::set<std::string> names;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto words = detail::split_words(lines[i]);
        if (words.empty()) continue;
        auto fail = [&](std::size_t column, const std::string& msg) {
            return ParseError(line_no, column, msg);
        };
        if (words[0].text == "program") {
            std::uint64_t index = 0;
            if (words.size() < 3 || !detail::parse_u64(words[1].text, index)) {
                throw fail(words[0].column, "expected 'program <index> <kind> ...'");
            }
            const std::string_view kind = words[2].text;
            const std::size_t body_at = words[2].column - 1 + kind.size();
            const std::string_view body = lines[i].substr(std::min(body_at, lines[i].size()));
            std::shared_ptr<const Program> program;
            try {
                if (kind == "expr") {
                    program = parse_expr_program(body);
                } else if (kind == "table") {
                    program = parse_table_program(body);
                } else if (kind == "cerules") {
                    if (words.size() != 3) throw fail(words[3].column, "cerules takes no inline body");
                    std::string rules;
                    const std::size_t first = i + 2;
                    for (++i;; ++i) {
                        if (i == lines.size()) throw fail(1, "cerules block without 'end'");
                        const auto inner = detail::split_ws(lines[i]);
                        if (inner.size() == 1 && inner[0] == "end") break;
                        rules.append(lines[i]).push_back('\n');
                    }
                    program = make_rules_program(parse_rule_table(rules, first));
                } else {
                    throw fail(words[2].column, "unknown program kind '" + std::string(kind) + "'");
                }
            } catch (const ParseError& e) {
                if (kind == "cerules") throw;
                // inline bodies report columns relative to the body
                throw fail(words[2].column, std::string(e.what()));
            }
            try {
                family.universe.add(index, std::move(program));
            } catch (const Error& e) {
                throw fail(words[1].column, e.what());
            }
        } else if (words[0].text == "opponent") {
            if (words.size() < 3) throw fail(words[0].column, "expected 'opponent <name> ...'");
            OpponentSpec spec;
            spec.name = std::string(words[1].text);
            if (!names.insert(spec.name).second) {
                throw fail(words[1].column, "opponent '" + spec.name + "' listed twice");
            }
            bool seen_g = false, seen_h = false, seen_r = false, seen_m = false;
            for (std::size_t w = 2; w < words.size(); ++w) {
                const std::string_view word = words[w].text;
                const std::size_t eq = word.find('=');
                std::uint64_t v = 0;
                if (eq == std::string_view::npos || !detail::parse_u64(word.substr(eq + 1), v)) {
                    throw fail(words[w].column, "expected key=<natural>");
                }
                const std::string_view key = word.substr(0, eq);
                if (key == "g") {
                    spec.index.i0 = v;
                    seen_g = true;
                } else if (key == "h") {
                    spec.index.i1 = v;
                    seen_h = true;
                } else if (key == "r") {
                    spec.index.i2 = v;
                    seen_r = true;
                } else if (key == "m") {
                    try {
                        spec.index = decode_index(v);
                    } catch (const Error& e) {
                        throw fail(words[w].column, e.what());
                    }
                    seen_m = true;
                } else {
                    throw fail(words[w].column, "unknown key '" + std::string(key) + "'");
                }
            }
            if (seen_m ? (seen_g || seen_h || seen_r) : !(seen_g && seen_h && seen_r)) {
                throw fail(words[0].column, "give either m= or all of g=, h=, r=");
            }
            family.opponents.push_back(std::move(spec));
        } else {
            throw fail(words[0].column, "unknown directive '" + std::string(words[0].text) + "'");
        }
    }
    return family;
}

PartialPSystem::PartialPSystem(std::string name, std::shared_ptr<const ProgramUniverse> universe,
                               OpponentIndex index)
    : name_(std::move(name)),
      universe_(std::move(universe)),
      index_(index),
      g_prog_(universe_->find(index.i0)),
      h_prog_(universe_->find(index.i1)),
      r_prog_(universe_->find(index.i2)) {}

void PartialPSystem::note(std::uint64_t index) { max_mentioned_ = std::max(max_mentioned_, index); }

void PartialPSystem::mark_invalid(std::string reason) {
    if (!invalid_) invalid_ = std::move(reason);
}

std::optional<AxiomId> PartialPSystem::g(std::uint64_t n, std::uint64_t fuel) {
    if (n < g_.size() && g_[n]) return g_[n];
    auto v = evaluate_program(g_prog_, ProgramInput{n, 0, 0}, fuel);
    if (!v) return std::nullopt;
    if (n >= g_.size()) g_.resize(n + 1);
    g_[n] = AxiomId{*v};
    note(*v);
    while (g_prefix_ < g_.size() && g_[g_prefix_]) ++g_prefix_;
    return g_[n];
}

std::optional<std::uint64_t> PartialPSystem::r_index(std::uint64_t n, std::uint64_t fuel) {
    if (auto it = r_.find(n); it != r_.end()) return it->second;
    auto v = evaluate_program(r_prog_, ProgramInput{n, 0, 0}, fuel);
    if (v) r_.emplace(n, *v);
    return v;
}

std::optional<Iterate> PartialPSystem::r_iterate(std::uint64_t n, const AxiomSet& E,
                                                 std::uint64_t fuel) {
    std::unordered_set<std::uint64_t> visited;
    std::uint64_t cur = n;
    for (std::uint64_t e = 0; e <= fuel; ++e) {
        auto v = g(cur, fuel);
        if (!v) return std::nullopt;
        if (E.count(*v) == 0) return Iterate{*v, e};
        // a revisited listing index can only cycle inside E
        if (!visited.insert(cur).second) return std::nullopt;
        auto next = r_index(cur, fuel);
        if (!next) return std::nullopt;
        cur = *next;
    }
    return std::nullopt;
}

std::optional<bool> PartialPSystem::h_ce(std::uint64_t s, std::uint64_t code, std::uint64_t fuel) {
    Union& u = h_[code];
    while (u.next_t <= s && !u.ce_at) {
        auto v = evaluate_program(h_prog_, ProgramInput{code, 0, u.next_t}, fuel);
        if (!v) return std::nullopt;
        if ((*v & code) != code) {
            mark_invalid("H(" + std::to_string(u.next_t) + ", " + std::to_string(code) +
                         ") does not contain its argument");
            return std::nullopt;
        }
        if (*v & 1) u.ce_at = u.next_t;
        ++u.next_t;
    }
    return u.ce_at && *u.ce_at <= s;
}

std::optional<bool> PartialPSystem::ce_in(std::uint64_t s, const AxiomSet& X, std::uint64_t fuel) {
    if (h_prog_ != nullptr && h_prog_->rules() != nullptr) {
        return contains_counterexample(evaluate(*h_prog_->rules(), s, X));
    }
    if (!pi_encodable(X)) return std::nullopt;
    return h_ce(s, pi_encode(CodedSet{false, X}), fuel);
}

OpponentStepResult PartialPSystem::step(std::uint64_t global_stage, std::uint64_t fuel) {
    OpponentStepResult out;
    auto invalid = [&]() {
        out.outcome = StepOutcome::kInvalid;
        out.detail = *invalid_;
        return out;
    };
    auto diverged = [&](const char* component) {
        diverged_ = component;
        out.outcome = StepOutcome::kDiverged;
        out.detail = component;
        return out;
    };
    if (invalid_) return invalid();

    const RuleTable* rules = h_prog_ != nullptr ? h_prog_->rules() : nullptr;
    if (rules != nullptr && !checked_rules_) {
        checked_rules_ = true;
        if (rules->has_bottom()) mark_invalid("H yields BOT, which a p-system cannot");
        for (const auto& rule : rules->rules()) {
            if (rule.premises.empty() && rule.conclusion.is_counterexample()) {
                mark_invalid("H yields CE from the empty set");
            }
        }
        if (invalid_) return invalid();
    }

    std::size_t k = 0;
    if (rules != nullptr) {
        if (auto t = triggers_.find(*rules, stage_)) k = t->k;
    } else {
        auto empty = ce_in(stage_, {}, fuel);
        if (!empty) return invalid_ ? invalid() : diverged("H");
        if (*empty) {
            mark_invalid("H yields CE from the empty set");
            return invalid();
        }
        AxiomSet prefix;
        for (std::size_t i = 0; i < sigma_.size(); ++i) {
            if (sigma_[i].is_axiom()) prefix.insert(sigma_[i].axiom());
            if (!pi_encodable(prefix)) {
                mark_invalid("belief string leaves the code range of H");
                return invalid();
            }
            auto hit = ce_in(stage_, prefix, fuel);
            if (!hit) return invalid_ ? invalid() : diverged("H");
            if (*hit) {
                k = i + 1;
                break;
            }
        }
    }

    TraceEvent e;
    e.stage = global_stage;
    std::uint64_t listing_index = 0;
    if (k == 0) {
        listing_index = sigma_.size();
        auto a = g(listing_index, fuel);
        if (!a) return diverged("g");
        e.kind = TraceEvent::Kind::kExpansion;
        e.new_axiom = *a;
        e.length_after = sigma_.size() + 1;
    } else {
        const Token old = sigma_[k - 1];
        if (old.is_gap()) throw Error(ErrorCode::kInvariant, "gap in a p-run of " + name_);
        auto next = r_index(listing_[k - 1], fuel);
        if (!next) return diverged("r");
        auto a = g(*next, fuel);
        if (!a) return diverged("g");
        if (*a == old.axiom()) {
            mark_invalid("r fixes " + format_axiom(*a));
            return invalid();
        }
        listing_index = *next;
        e.kind = TraceEvent::Kind::kReplacement;
        e.k = k;
        e.old_axiom = old.axiom();
        e.new_axiom = *a;
        e.length_after = k;
        triggers_.truncate(k - 1, sigma_);
        sigma_.truncate(k - 1);
        listing_.resize(k - 1);
    }
    sigma_.push_back(Token::of(*e.new_axiom));
    listing_.push_back(listing_index);
    triggers_.push(sigma_.back());
    note(e.new_axiom->index);
    ++stage_;
    diverged_.reset();
    history_.push_back(e);
    out.event = e;
    return out;
}

std::vector<PartialPSystem> instantiate(const OpponentFamily& family) {
    auto universe = std::make_shared<const ProgramUniverse>(family.universe);
    std::vector<PartialPSystem> out;
    out.reserve(family.opponents.size());
    for (const auto& spec : family.opponents) out.emplace_back(spec.name, universe, spec.index);
    return out;
}

OpponentStepResult opponent_step(PartialPSystem& theta, std::uint64_t global_stage,
                                 std::uint64_t fuel) {
    return theta.step(global_stage, fuel);
}

std::optional<Iterate> r_iterate(PartialPSystem& theta, std::uint64_t listing_index,
                                 const AxiomSet& E, std::uint64_t fuel) {
    return theta.r_iterate(listing_index, E, fuel);
}

}  // namespace dialectic
