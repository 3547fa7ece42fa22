// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dialectic {

/// Position of an axiom in the canonical listing a_0, a_1, ...
struct AxiomId {
    std::uint64_t index = 0;

    friend auto operator<=>(const AxiomId&, const AxiomId&) = default;
};

inline AxiomId axiom(std::uint64_t index) { return AxiomId{index}; }

using AxiomSet = std::set<AxiomId>;

/// One entry of a belief string: an axiom or the gap marker `*`.
class Token {
public:
    Token() noexcept : value_(kGapValue) {}
    static Token gap() { return Token(kGapValue); }
    static Token of(AxiomId id) { return Token(id.index); }

    bool is_gap() const noexcept { return value_ == kGapValue; }
    bool is_axiom() const noexcept { return !is_gap(); }
    /// Precondition: is_axiom().
    AxiomId axiom() const noexcept { return AxiomId{value_}; }

    friend bool operator==(const Token&, const Token&) = default;

private:
    static constexpr std::uint64_t kGapValue = std::numeric_limits<std::uint64_t>::max();
    explicit Token(std::uint64_t value) : value_(value) {}
    std::uint64_t value_;
};

/// The agent's state at one stage: a finite string over axioms and gaps.
/// Positions are 0-based; duplicate axioms are allowed.
class BeliefString {
public:
    BeliefString() = default;
    explicit BeliefString(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}
    BeliefString(std::initializer_list<Token> tokens) : tokens_(tokens) {}

    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }
    const Token& operator[](std::size_t i) const { return tokens_[i]; }
    const Token& back() const { return tokens_.back(); }
    const std::vector<Token>& tokens() const noexcept { return tokens_; }

    auto begin() const { return tokens_.begin(); }
    auto end() const { return tokens_.end(); }

    /// First `k` tokens; throws kOutOfRange when k > size().
    BeliefString prefix(std::size_t k) const;
    /// True when this string is an initial segment of `other`.
    bool is_prefix_of(const BeliefString& other) const;

    void push_back(Token t) { tokens_.push_back(t); }
    void truncate(std::size_t k) { tokens_.resize(k); }
    void set_back(Token t) { tokens_.back() = t; }

    friend bool operator==(const BeliefString&, const BeliefString&) = default;

private:
    std::vector<Token> tokens_;
};

/// Axioms occurring in `sigma`; gaps are skipped.
AxiomSet range(const BeliefString& sigma);

/// sigma restricted to its first k entries; requires k < |sigma|.
BeliefString contraction(const BeliefString& sigma, std::size_t k);
/// Appends a_{|sigma|}.
BeliefString expansion(const BeliefString& sigma);
/// Swaps the trailing axiom a_i for `new_axiom` (which must differ from a_i).
BeliefString replacement(const BeliefString& sigma, AxiomId new_axiom);
/// Swaps the trailing axiom for a gap.
BeliefString excision(const BeliefString& sigma);

std::string format_axiom(AxiomId id);
std::string format_token(Token t);
/// Space-separated tokens, e.g. "a0 * a2".
std::string format(const BeliefString& sigma);
std::string format(const AxiomSet& set);

/// Reads one token ("a<k>" or "*"); throws kParse on anything else.
Token parse_token(std::string_view text);
AxiomId parse_axiom(std::string_view text);
BeliefString parse_belief_string(std::string_view text);

}  // namespace dialectic

template <>
struct std::hash<dialectic::AxiomId> {
    std::size_t operator()(const dialectic::AxiomId& id) const noexcept {
        return std::hash<std::uint64_t>{}(id.index);
    }
};
