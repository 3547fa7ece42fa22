// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "dialectic/consequence.hpp"
#include "dialectic/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dialectic;

namespace {

RuleTable T(const char* text) { return parse_rule_table(text); }
AxiomSet A(std::initializer_list<std::uint64_t> xs) {
    AxiomSet out;
    for (auto x : xs) out.insert(axiom(x));
    return out;
}

SymbolSet syms(std::initializer_list<std::uint64_t> xs, bool bot = false, bool ce = false) {
    SymbolSet out;
    for (auto x : xs) out.insert(Symbol::of(axiom(x)));
    if (bot) out.insert(Symbol::bottom());
    if (ce) out.insert(Symbol::counterexample());
    return out;
}

std::vector<AxiomSet> subsets(std::uint64_t n) {
    std::vector<AxiomSet> out;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
        AxiomSet s;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (mask >> i & 1) s.insert(axiom(i));
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("evaluate") {
    CHECK(evaluate(RuleTable{}, 5, A({0, 1})) == syms({0, 1}));
    CHECK(evaluate(T("at 3 : a0 |- BOT"), 2, A({0})) == syms({0}));
    CHECK(evaluate(T("at 3 : a0 |- BOT"), 3, A({0, 4})) == syms({0, 4}, true));
}

TEST_CASE("limit_closure") {
    CHECK(limit_closure(RuleTable{}, A({0})) == syms({0}));
    CHECK(limit_closure(T("at 3 : a0 |- BOT\nat 7 : a0 |- CE"), A({0})) == syms({0}, true, true));
    CHECK(limit_closure(T("at 3 : a1 |- BOT"), A({0})) == syms({0}));
}

TEST_CASE("evaluation is monotone in stage and set") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        RuleTable t;
        for (int i = 0; i < 6; ++i) {
            ConsequenceRule r;
            r.stage = rng() % 5;
            for (int j = 0; j < 2; ++j) r.premises.insert(axiom(rng() % 6));
            r.conclusion = rng() % 3 == 0 ? Symbol::bottom() : Symbol::of(axiom(rng() % 6));
            t.append(r);
        }
        auto all = subsets(5);
        for (const auto& F : all) {
            for (std::uint64_t n = 0; n < 5; ++n) {
                auto base = evaluate(t, n, F);
                auto later = evaluate(t, n + 1, F);
                CHECK(std::includes(later.begin(), later.end(), base.begin(), base.end()));
                for (const auto& G : all) {
                    if (!std::includes(G.begin(), G.end(), F.begin(), F.end())) continue;
                    auto big = evaluate(t, n, G);
                    CHECK(std::includes(big.begin(), big.end(), base.begin(), base.end()));
                }
            }
        }
    }
}

TEST_CASE("validate_aco") {
    auto empty = validate_aco(RuleTable{}, 4);
    CHECK(empty.passed);

    auto chain = validate_aco(T("at 0 : a0 |- a1\nat 0 : a1 |- a2"), 4);
    CHECK_FALSE(chain.passed);
    bool found = false;
    for (const auto& v : chain.violations) {
        if (v.kind == Violation::Kind::kIteration && v.witness == A({0})) found = true;
    }
    CHECK(found);

    // brute force: the closure of {a0} under the two rules reaches a2 but one step does not
    auto one_step = limit_closure(T("at 0 : a0 |- a1\nat 0 : a1 |- a2"), A({0}));
    CHECK_FALSE(one_step.count(Symbol::of(axiom(2))));

    auto trig = validate_aco(T("at 2 : a0 a1 |- BOT\nat 5 : a3 |- CE"), 4);
    CHECK(trig.passed);
    CHECK(trig.structural_iteration);

    try {
        validate_aco(T("at 0 : a9 |- BOT"), 4);
        FAIL("expected scope error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kValidationScope);
    }
}

TEST_CASE("close_table repairs iteration") {
    auto closed = close_table(T("at 0 : a0 |- a1\nat 3 : a1 |- a2"));
    CHECK(validate_aco(closed, 4).passed);
    CHECK(evaluate(closed, 3, A({0})).count(Symbol::of(axiom(2))));
    CHECK_FALSE(evaluate(closed, 2, A({0})).count(Symbol::of(axiom(2))));
}

TEST_CASE("from_horn") {
    auto t = from_horn({axiom(0), axiom(1), axiom(2)}, {}, {A({1, 2})});
    REQUIRE(t.size() == 1);
    CHECK(t.rules()[0] == ConsequenceRule{0, A({1, 2}), Symbol::bottom()});

    auto chain = from_horn({axiom(0), axiom(1), axiom(2)},
                           {HornRule{A({0}), axiom(1)}, HornRule{A({1}), axiom(2)}}, {});
    bool derived = false;
    for (const auto& r : chain.rules()) {
        if (r.premises == A({0}) && r.conclusion == Symbol::of(axiom(2)) && r.stage == 2) {
            derived = true;
        }
    }
    CHECK(derived);
    CHECK(validate_aco(chain, 4).passed);
    // agrees with forward chaining on every premise set
    std::vector<oracle::Horn> horn{{{0}, 1}, {{1}, 2}};
    for (const auto& F : subsets(3)) {
        std::set<int> facts;
        for (auto a : F) facts.insert(static_cast<int>(a.index));
        auto expect = oracle::forward_chain(facts, horn);
        auto got = axioms_of(limit_closure(chain, F));
        CHECK(got.size() == expect.size());
    }

    CHECK(from_horn({}, {}, {}).empty());
    CHECK_THROWS_AS(from_horn({axiom(0)}, {}, {A({0, 5})}), Error);
}

TEST_CASE("revision_operator") {
    CHECK(revision_operator(RuleTable{}, A({0, 1}), axiom(5)).empty());

    auto r = revision_operator(T("at 0 : a5 a1 |- BOT"), A({0, 1}), axiom(5));
    REQUIRE(r.size() == 1);
    CHECK(r.rules()[0] == ConsequenceRule{0, A({1}), Symbol::bottom()});

    const AxiomSet K = A({0, 1});
    auto revised = revision_operator(
        from_horn({axiom(0), axiom(1), axiom(2), axiom(3)}, {HornRule{A({2}), axiom(3)}},
                  {A({3, 1})}),
        K, axiom(2));
    for (const auto& F : subsets(2)) {
        for (std::uint64_t n = 0; n < 4; ++n) {
            AxiomSet with_b = F;
            with_b.insert(axiom(2));
            SymbolSet expect;
            for (const auto& s : evaluate(
                     from_horn({axiom(0), axiom(1), axiom(2), axiom(3)},
                               {HornRule{A({2}), axiom(3)}}, {A({3, 1})}),
                     n, with_b)) {
                if (s.is_bottom() || (s.is_axiom() && K.count(s.axiom()))) expect.insert(s);
            }
            CHECK(evaluate(revised, n, F) == expect);
        }
    }
    CHECK_THROWS_AS(revision_operator(RuleTable{}, A({0}), axiom(0)), Error);
}

TEST_CASE("stream_revision_operator") {
    auto base = T("at 0 : a7 a1 |- BOT\nat 1 : a8 a0 |- BOT\nat 0 : a0 |- a9");
    const AxiomSet K = A({0, 1});
    auto none = stream_revision_operator(base, K, {});
    CHECK(none.size() == 2);

    auto one = stream_revision_operator(T("at 0 : a7 a1 |- BOT"), K, {axiom(7)});
    CHECK(evaluate(one, 0, A({1})).count(Symbol::bottom()));

    const std::vector<AxiomId> stream{axiom(7), axiom(8)};
    auto two = stream_revision_operator(base, K, stream);
    for (const auto& F : subsets(2)) {
        for (std::uint64_t n = 0; n < 4; ++n) {
            AxiomSet injected = F;
            for (std::uint64_t i = 0; i <= n && i < stream.size(); ++i) injected.insert(stream[i]);
            SymbolSet expect;
            for (const auto& s : evaluate(base, n, injected)) {
                if (s.is_bottom() || (s.is_axiom() && K.count(s.axiom()))) expect.insert(s);
            }
            CHECK(evaluate(two, n, F) == expect);
        }
    }
    CHECK_FALSE(evaluate(two, 0, A({0})).count(Symbol::bottom()));
    CHECK(evaluate(two, 1, A({0})).count(Symbol::bottom()));
}

TEST_CASE("rule text") {
    auto t = T("# comment\nat 3 : a0 a2 |- BOT\n\nat 0 : |- a4\nat 1 : a1 |- CE\n");
    CHECK(format(t) == "at 3 : a0 a2 |- BOT\nat 0 : |- a4\nat 1 : a1 |- CE\n");
    CHECK(parse_rule_table(format(t)) == t);
    try {
        T("at 3 : a0 |- XX");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 1);
    }
}
