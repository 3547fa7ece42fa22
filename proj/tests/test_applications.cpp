// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "dialectic/applications.hpp"
#include "dialectic/error.hpp"
#include "doctest.h"
#include "kb_corpus.hpp"
#include "oracles.hpp"

using namespace dialectic;

namespace {

AxiomSet ids(std::initializer_list<std::uint64_t> xs) {
    AxiomSet out;
    for (auto x : xs) out.insert(axiom(x));
    return out;
}

bool holds(const BeliefString& sigma, AxiomId a) { return range(sigma).count(a) != 0; }

}  // namespace

TEST_CASE("kb parsing") {
    auto kb = parse_kb("item k0\nitem k1 # comment\nrule k0 k1 -> k1\nconflict k1\nreplace k0 -> k1\n");
    CHECK(kb.size() == 2);
    CHECK(kb.find("k1") == std::optional<AxiomId>(axiom(1)));
    CHECK(kb.horn_rules.size() == 1);
    CHECK(kb.conflicts == std::vector<AxiomSet>{ids({1})});
    CHECK(kb.hints.at(axiom(0)) == axiom(1));
    CHECK(parse_kb(format(kb)).names == kb.names);
    CHECK(format(parse_kb(format(kb))) == format(kb));

    auto err = [](const char* text) {
        try {
            parse_kb(text);
        } catch (const ParseError& e) {
            return std::make_pair(e.line(), e.column());
        }
        return std::make_pair(std::size_t{0}, std::size_t{0});
    };
    CHECK(err("item a\nconflict a b\n") == std::make_pair(std::size_t{2}, std::size_t{12}));
    CHECK(err("item a\nitem a\n") == std::make_pair(std::size_t{2}, std::size_t{6}));
    CHECK(err("item a\n  rule a ->\n") == std::make_pair(std::size_t{2}, std::size_t{3}));
    CHECK(err("fact a\n").first == 1);
    CHECK(err("item a\nconflict\n").first == 2);
}

TEST_CASE("repair examples") {
    SUBCASE("consistent KB is kept whole") {
        auto kb = parse_kb("item k0\nitem k1\nitem k2\nrule k0 -> k2\n");
        auto res = repair(kb, 50, 10);
        CHECK(res.stable);
        CHECK(res.kept == ids({0, 1, 2}));
        CHECK(res.removed.empty());
    }
    SUBCASE("the less entrenched side of a conflict goes") {
        auto kb = parse_kb("item k0\nitem k1\nitem k2\nitem k3\nconflict k1 k2\n");
        auto res = repair(kb, 50, 10);
        CHECK(res.kept == ids({0, 1, 3}));
        CHECK(res.removed == ids({2}));
        // Hand simulation: a1, a2 present at stage 3, so position 3 is excised.
        REQUIRE(res.trace.events.size() > 3);
        CHECK(res.trace.events[2].kind == TraceEvent::Kind::kExpansion);
        CHECK(res.trace.events[3].kind == TraceEvent::Kind::kExcision);
        CHECK(res.trace.events[3].k == 3);
    }
    SUBCASE("self-inconsistent items") {
        auto kb = parse_kb("item k0\nitem k1\nconflict k0\nconflict k1\n");
        auto res = repair(kb, 50, 10);
        CHECK(res.kept.empty());
        CHECK(res.removed == ids({0, 1}));
    }
    SUBCASE("conflict through a derived fact") {
        auto kb = parse_kb("item k0\nitem k1\nitem k2\nrule k0 -> k1\nconflict k1 k2\n");
        auto res = repair(kb, 50, 10);
        CHECK(res.kept == ids({0, 1}));
    }
    SUBCASE("bundled file") {
        std::ifstream in(DIALECTIC_SOURCE_DIR "/data/conflict.kb");
        std::stringstream ss;
        ss << in.rdbuf();
        auto kb = parse_kb(ss.str());
        auto res = repair(kb, 200, 50);
        CHECK(format(kb, res) == "status=stable\nkept: calibrated reading_hot fan_on\nremoved: reading_cold\n");
    }
    SUBCASE("horizon shorter than the KB") {
        auto kb = parse_kb("item k0\nitem k1\nitem k2\n");
        CHECK_THROWS_AS(repair(kb, 2, 1), Error);
    }
    SUBCASE("short horizon is flagged") {
        auto kb = parse_kb("item k0\nitem k1\nitem k2\nitem k3\nconflict k1 k2\n");
        CHECK_FALSE(repair(kb, 4, 3).stable);
    }
}

TEST_CASE("q mode uses replacement hints") {
    auto kb = parse_kb("item k0\nitem k1\nitem k2\nconflict k0 k1\nreplace k1 -> k2\n");
    auto q = repair(kb, 40, 10, RepairMode::kQ);
    CHECK(q.kept == ids({0, 2}));
    bool replaced = false;
    for (const auto& e : q.trace.events) {
        CHECK(e.kind != TraceEvent::Kind::kExcision);
        replaced = replaced || e.kind == TraceEvent::Kind::kReplacement;
    }
    CHECK(replaced);
    auto d = repair(kb, 40, 10);
    CHECK(d.kept == ids({0, 2}));
    for (const auto& e : d.trace.events) CHECK(e.kind != TraceEvent::Kind::kReplacement);
}

TEST_CASE("revise examples") {
    const auto kb = parse_kb("item k0\nitem k1\n");
    SUBCASE("consistent input changes nothing") {
        auto in = parse_kb_extension(kb, "item b\nrule b -> k1\n");
        auto res = revise(kb, in, 50, 10);
        CHECK_FALSE(res.rejected);
        CHECK(res.kept == ids({0, 1}));
        CHECK(format(in, res) == "status=stable\nkept: k0 k1\nremoved:\naccepted: b\n");
    }
    SUBCASE("input conflicting with k1") {
        auto in = parse_kb_extension(kb, "item b\nconflict b k1\n");
        auto res = revise(kb, in, 50, 10);
        CHECK(res.kept == ids({0}));
        CHECK(res.removed == ids({1}));
        CHECK_FALSE(contains_bottom(limit_closure(kb_table(in), ids({0, 2}))));
    }
    SUBCASE("input beats the most entrenched item") {
        auto in = parse_kb_extension(kb, "item b\nconflict k0 b\n");
        auto res = revise(kb, in, 50, 10);
        CHECK(res.kept == ids({1}));
    }
    SUBCASE("consequences of b count against K") {
        auto in = parse_kb_extension(kb, "item b\nitem c\nrule b -> c\nconflict c k0\n");
        CHECK_THROWS_AS(revise(kb, in, 50, 10), Error);
        auto two = parse_kb("item k0\nitem k1\nitem c\nconflict c k0\n");
        auto in2 = parse_kb_extension(two, "item b\nrule b -> c\n");
        auto res = revise(two, in2, 50, 10);
        CHECK(res.kept == ids({1, 2}));
    }
    SUBCASE("self-inconsistent input is rejected") {
        auto in = parse_kb_extension(kb, "item b\nconflict b\n");
        auto res = revise(kb, in, 50, 10);
        CHECK(res.rejected);
        CHECK(format(in, res) == "status=rejected-input\naccepted: b\n");
    }
}

TEST_CASE("revise_stream examples") {
    const auto kb = parse_kb("item k0\nitem k1\nitem k2\nconflict k1 k2\n");
    SUBCASE("empty stream equals repair") {
        auto stream = parse_kb_extension(kb, "");
        auto a = revise_stream(kb, stream, 60, 15);
        auto b = repair(kb, 60, 15);
        CHECK(a.kept == b.kept);
        CHECK(format_trace(a.trace) == format_trace(b.trace));
    }
    SUBCASE("a late conflict removes k0 only after stage 1") {
        auto stream = parse_kb_extension(kb, "item b0\nitem b1\nconflict b1 k0\n");
        auto res = revise_stream(kb, stream, 60, 15);
        CHECK(holds(res.trace.sigma_at(1), axiom(0)));
        CHECK_FALSE(holds(res.trace.sigma_at(2), axiom(0)));
        CHECK(res.removed.count(axiom(0)));
        for (const auto& e : res.trace.events) {
            if (e.kind == TraceEvent::Kind::kExcision && e.old_axiom == axiom(0)) CHECK(e.stage >= 1);
        }
        CHECK(res.kept == ids({1}));
        CHECK(res.accepted == std::vector<AxiomId>{axiom(3), axiom(4)});
    }
    SUBCASE("mutually conflicting inputs are flagged") {
        auto stream = parse_kb_extension(kb, "item b0\nitem b1\nconflict b0 b1\n");
        auto res = revise_stream(kb, stream, 60, 15);
        CHECK(res.inconsistent_input);
        CHECK(format(stream, res) == "status=inconsistent-input\naccepted: b0 b1\n");
    }
}

TEST_CASE("repair matches the entrenchment-first greedy subset") {
    std::mt19937_64 rng(20261018);
    for (int trial = 0; trial < 1500; ++trial) {
        auto c = corpus::random_kb(rng);
        CAPTURE(format(c.kb));
        auto res = repair(c.kb, 200, 60);
        REQUIRE(res.stable);
        std::set<int> kept;
        for (AxiomId a : res.kept) kept.insert(static_cast<int>(a.index));
        CHECK(kept == oracle::greedy_repair(c.items, c.rules, c.conflicts));
        CHECK_FALSE(contains_bottom(limit_closure(res.table, res.kept)));
    }
}

TEST_CASE("applications are deterministic") {
    auto kb = parse_kb("item k0\nitem k1\nitem k2\nrule k0 -> k1\nconflict k1 k2\n");
    auto a = repair(kb, 80, 20);
    auto b = repair(kb, 80, 20);
    CHECK(format_trace(a.trace) == format_trace(b.trace));
    CHECK(format(kb, a) == format(kb, b));
}
