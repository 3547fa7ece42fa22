// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "dialectic/core.hpp"
#include "dialectic/error.hpp"
#include "doctest.h"

using namespace dialectic;

namespace {

BeliefString S(const char* text) { return parse_belief_string(text); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::kInvariant;
}

}  // namespace

TEST_CASE("range collects axioms and skips gaps") {
    CHECK(range(S("")).empty());
    CHECK(range(S("a0 * a2")) == AxiomSet{axiom(0), axiom(2)});
    CHECK(range(S("a2 a1 a2")) == AxiomSet{axiom(1), axiom(2)});
}

TEST_CASE("range agrees with a token scan on random strings") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Token> toks;
        std::set<std::uint64_t> expect;
        const int n = static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            if (rng() % 4 == 0) {
                toks.push_back(Token::gap());
            } else {
                const std::uint64_t v = rng() % 5;
                toks.push_back(Token::of(axiom(v)));
                expect.insert(v);
            }
        }
        AxiomSet got = range(BeliefString(toks));
        REQUIRE(got.size() == expect.size());
        for (auto v : expect) CHECK(got.count(axiom(v)));
    }
}

TEST_CASE("contraction") {
    CHECK(contraction(S("a0 a1 a2"), 1) == S("a0"));
    CHECK(contraction(S("a0"), 0) == S(""));
    CHECK(contraction(S("a0 * a2"), 2) == S("a0 *"));
    CHECK(code_of([] { contraction(S("a0"), 1); }) == ErrorCode::kOutOfRange);
}

TEST_CASE("expansion appends a_|sigma|") {
    CHECK(expansion(S("")) == S("a0"));
    CHECK(expansion(S("a0 a1")) == S("a0 a1 a2"));
    CHECK(expansion(S("a2")) == S("a2 a1"));
}

TEST_CASE("replacement") {
    CHECK(replacement(S("a0 a1"), axiom(3)) == S("a0 a3"));
    CHECK(replacement(S("a0"), axiom(2)) == S("a2"));
    CHECK(code_of([] { replacement(S("a0 a1"), axiom(1)); }) == ErrorCode::kInvalidReplacement);
    CHECK(code_of([] { replacement(S(""), axiom(1)); }) == ErrorCode::kInvalidReplacement);
    CHECK(code_of([] { replacement(S("a0 *"), axiom(1)); }) == ErrorCode::kInvalidReplacement);
}

TEST_CASE("excision") {
    CHECK(excision(S("a0 a1")) == S("a0 *"));
    CHECK(excision(S("a0")) == S("*"));
    CHECK(code_of([] { excision(S("a0 *")); }) == ErrorCode::kInvalidExcision);
    CHECK(code_of([] { excision(S("")); }) == ErrorCode::kInvalidExcision);
}

TEST_CASE("operation laws") {
    const BeliefString s = S("a3 * a1 a4");
    for (std::size_t k = 0; k < s.size(); ++k) {
        for (auto a : range(contraction(s, k))) CHECK(range(s).count(a));
        CHECK(contraction(s, k).size() == k);
    }
    CHECK(expansion(s).size() == s.size() + 1);
    CHECK(expansion(s).prefix(s.size()) == s);
    CHECK(replacement(s, axiom(9)).size() == s.size());
    CHECK(excision(s).size() == s.size());
}

TEST_CASE("token text round trip") {
    CHECK(format(S("a0 * a12")) == "a0 * a12");
    CHECK(format_token(parse_token("*")) == "*");
    CHECK(code_of([] { parse_token("b3"); }) == ErrorCode::kParse);
}
