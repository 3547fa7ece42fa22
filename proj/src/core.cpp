// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/core.hpp"

#include <charconv>
#include <sstream>

#include "dialectic/error.hpp"
#include "text_util.hpp"

namespace dialectic {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kOutOfRange: return "out-of-range";
        case ErrorCode::kInvalidReplacement: return "invalid-replacement";
        case ErrorCode::kInvalidExcision: return "invalid-excision";
        case ErrorCode::kParse: return "parse";
        case ErrorCode::kSchema: return "schema";
        case ErrorCode::kValidationScope: return "validation-scope";
        case ErrorCode::kRejectedTable: return "rejected-table";
        case ErrorCode::kMissingReplacement: return "missing-replacement";
        case ErrorCode::kCyclicReplacement: return "cyclic-replacement";
        case ErrorCode::kInvariant: return "invariant-violation";
        case ErrorCode::kDomain: return "domain";
        case ErrorCode::kTranslation: return "translation";
        case ErrorCode::kUndefinedPosition: return "undefined-position";
        case ErrorCode::kAlignmentScope: return "alignment-scope";
        case ErrorCode::kRejectedInput: return "rejected-input";
    }
    return "unknown";
}

BeliefString BeliefString::prefix(std::size_t k) const {
    if (k > tokens_.size()) {
        throw Error(ErrorCode::kOutOfRange, "prefix length " + std::to_string(k) +
                                                " exceeds string length " +
                                                std::to_string(tokens_.size()));
    }
    return BeliefString(std::vector<Token>(tokens_.begin(), tokens_.begin() + k));
}

bool BeliefString::is_prefix_of(const BeliefString& other) const {
    if (size() > other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!(tokens_[i] == other.tokens_[i])) return false;
    }
    return true;
}

AxiomSet range(const BeliefString& sigma) {
    AxiomSet out;
    for (const Token& t : sigma) {
        if (t.is_axiom()) out.insert(t.axiom());
    }
    return out;
}

BeliefString contraction(const BeliefString& sigma, std::size_t k) {
    if (k >= sigma.size()) {
        throw Error(ErrorCode::kOutOfRange, "contraction needs k < |sigma| (k=" +
                                                std::to_string(k) + ", |sigma|=" +
                                                std::to_string(sigma.size()) + ")");
    }
    return sigma.prefix(k);
}

BeliefString expansion(const BeliefString& sigma) {
    BeliefString out = sigma;
    out.push_back(Token::of(AxiomId{sigma.size()}));
    return out;
}

BeliefString replacement(const BeliefString& sigma, AxiomId new_axiom) {
    if (sigma.empty()) {
        throw Error(ErrorCode::kInvalidReplacement, "replacement on the empty string");
    }
    if (sigma.back().is_gap()) {
        throw Error(ErrorCode::kInvalidReplacement, "replacement of a gap");
    }
    if (sigma.back().axiom() == new_axiom) {
        throw Error(ErrorCode::kInvalidReplacement,
                    "replacement must change the axiom (" + format_axiom(new_axiom) + ")");
    }
    BeliefString out = sigma;
    out.set_back(Token::of(new_axiom));
    return out;
}

BeliefString excision(const BeliefString& sigma) {
    if (sigma.empty()) {
        throw Error(ErrorCode::kInvalidExcision, "excision on the empty string");
    }
    if (sigma.back().is_gap()) {
        throw Error(ErrorCode::kInvalidExcision, "last entry is already a gap");
    }
    BeliefString out = sigma;
    out.set_back(Token::gap());
    return out;
}

std::string format_axiom(AxiomId id) { return "a" + std::to_string(id.index); }

std::string format_token(Token t) { return t.is_gap() ? "*" : format_axiom(t.axiom()); }

std::string format(const BeliefString& sigma) {
    std::string out;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i) out += ' ';
        out += format_token(sigma[i]);
    }
    return out;
}

std::string format(const AxiomSet& set) {
    std::string out = "{";
    bool first = true;
    for (AxiomId id : set) {
        if (!first) out += ',';
        first = false;
        out += format_axiom(id);
    }
    return out + "}";
}

AxiomId parse_axiom(std::string_view text) {
    std::uint64_t value = 0;
    if (text.size() < 2 || text[0] != 'a' || !detail::parse_u64(text.substr(1), value)) {
        throw Error(ErrorCode::kParse, "bad axiom token '" + std::string(text) + "'");
    }
    return AxiomId{value};
}

Token parse_token(std::string_view text) {
    if (text == "*") return Token::gap();
    return Token::of(parse_axiom(text));
}

BeliefString parse_belief_string(std::string_view text) {
    BeliefString out;
    for (std::string_view word : detail::split_ws(text)) out.push_back(parse_token(word));
    return out;
}

}  // namespace dialectic
