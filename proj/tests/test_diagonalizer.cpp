// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "dialectic/diagonalizer.hpp"
#include "dialectic/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dialectic;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<PartialPSystem> bundled() {
    return instantiate(parse_family(slurp(DIALECTIC_SOURCE_DIR "/data/opponents.fam")));
}

std::vector<PartialPSystem> family(const char* text) { return instantiate(parse_family(text)); }

AxiomSet below(std::uint64_t n) {
    AxiomSet out;
    for (std::uint64_t k = 0; k < n; ++k) out.insert(AxiomId{k});
    return out;
}

std::map<std::int64_t, std::int64_t> oracle_r(const ReplacementMap& r) {
    std::map<std::int64_t, std::int64_t> out;
    for (auto [k, v] : r.entries()) out[static_cast<std::int64_t>(k.index)] = static_cast<std::int64_t>(v.index);
    return out;
}

RuleTable table_of(const std::vector<AppendedRule>& rules, std::size_t max_strategy) {
    RuleTable t;
    for (const auto& r : rules) {
        if (r.strategy <= max_strategy) t.append(r.rule);
    }
    return t;
}

const char* kTwoSteps =
    "program 0 expr x\n"
    "program 1 cerules\n"
    "end\n"
    "program 2 expr x + 1\n"
    "opponent a g=0 h=1 r=2\n"
    "opponent b g=0 h=1 r=2\n";

}  // namespace

TEST_CASE("predict_order examples") {
    // g lists a_N, a_{N+1}, a_{N+2} at 0, 1, 2 and a_5 at 3; r maps listing indices.
    const char* text =
        "program 0 table 0:20 1:21 2:22 3:5\n"
        "program 1 cerules\n"
        "end\n"
        "program 2 table 0:1\n"
        "program 3 table 0:2\n"
        "program 4 table 0:3\n"
        "opponent one g=0 h=1 r=2\n"
        "opponent two g=0 h=1 r=3\n"
        "opponent five g=0 h=1 r=4\n";
    auto ops = family(text);
    const AxiomSet E{axiom(20)};
    const AxiomSet targets{axiom(21), axiom(22)};

    auto a = predict_order(ops[0], E, 3, targets, 50);
    REQUIRE(a);
    CHECK(*a == std::vector<AxiomId>{axiom(21)});

    auto b = predict_order(ops[1], E, 3, targets, 50);
    REQUIRE(b);
    CHECK(*b == std::vector<AxiomId>{axiom(22)});

    auto c = predict_order(ops[2], E, 3, targets, 50);
    REQUIRE(c);
    CHECK(*c == std::vector<AxiomId>{axiom(5), axiom(21)});

    // r undefined at the only iterate that matters: waiting.
    auto waiting = family(
        "program 0 table 0:20 1:21 2:22\nprogram 1 cerules\nend\nopponent w g=0 h=1 r=9\n");
    CHECK_FALSE(predict_order(waiting[0], E, 3, targets, 1000).has_value());
}

TEST_CASE("stage 1 activates R0 and extends r") {
    Scheduler sch(family(kTwoSteps));
    sch.schedule_stage();
    CHECK(sch.timeline().empty());
    sch.schedule_stage();
    REQUIRE(sch.timeline().size() == 1);
    CHECK(sch.timeline()[0].stage == 1);
    CHECK(sch.timeline()[0].text == "activated N=3");
    CHECK(sch.strategies()[0].step == StrategyStep::kS2Wait);
    CHECK(sch.strategies()[1].step == StrategyStep::kDeactivated);
    const auto& r = sch.gamma().replacement();
    CHECK(r.at(axiom(3)) == std::optional<AxiomId>(axiom(5)));
    CHECK(r.at(axiom(0)) == std::optional<AxiomId>(axiom(1)));
    CHECK(r.size() == 2);
}

TEST_CASE("idle stages activate the next strategy") {
    std::string text;
    for (int i = 0; i < 50; ++i) text += "opponent o" + std::to_string(i) + " g=0 h=1 r=2\n";
    Scheduler sch(family(text.c_str()));
    for (int s = 0; s <= 50; ++s) sch.schedule_stage();
    REQUIRE(sch.activations().size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(sch.activations()[i].strategy == i);
        CHECK(sch.activations()[i].stage == i + 1);
    }
    CHECK(sch.gamma().replacement().least_undefined() > 50);
}

TEST_CASE("higher priority acts first and injures the lower one") {
    // R0's r(g_l) needs 12 units of fuel, so R0 and R1 both become ready at stage 11.
    const char* text =
        "program 0 expr x\n"
        "program 1 cerules\n"
        "end\n"
        "program 2 expr x + 1\n"
        "program 3 expr -(0 - (x + 1)) + 0 + 0 + 0\n"
        "opponent slow g=0 h=1 r=3\n"
        "opponent fast g=0 h=1 r=2\n";
    Scheduler sch(family(text));
    for (int s = 0; s < 11; ++s) sch.schedule_stage();
    CHECK(sch.strategies()[0].step == StrategyStep::kS2Wait);
    CHECK(sch.strategies()[1].step == StrategyStep::kS2Wait);
    CHECK(sch.strategies()[1].N == 8);
    CHECK(sch.opponents()[1].sigma().size() > 10);  // R1's wait condition holds too
    sch.schedule_stage();
    auto rep = sch.report();
    CHECK(rep.actions[0] == std::vector<std::uint64_t>{11});
    CHECK(rep.actions[1].empty());
    CHECK(rep.injuries[1] == std::vector<std::uint64_t>{11});
    CHECK(sch.strategies()[1].step == StrategyStep::kDeactivated);
    CHECK(sch.strategies()[0].step == StrategyStep::kS5Wait);
}

TEST_CASE("Step 4 cases") {
    // r = x + 1: rho ends in a_{N+1}, so a ce rule and a replacement of a_N.
    auto rep = diagonalize(family(kTwoSteps), 40);
    REQUIRE(!rep.rules.empty());
    const auto& first = rep.rules.front();
    CHECK(first.step == "S4");
    CHECK(first.rule.conclusion.is_counterexample());
    AxiomSet expect = below(3);
    expect.insert(axiom(3));
    CHECK(first.rule.premises == expect);
    bool replaced = false;
    for (const auto& e : rep.trace.events) {
        if (e.kind == TraceEvent::Kind::kReplacement && e.old_axiom == axiom(3)) {
            replaced = true;
            CHECK(*e.new_axiom == axiom(5));
        }
    }
    CHECK(replaced);

    // r = x + 2: rho ends in a_{N+2}, so a BOT rule and an excision of a_N.
    auto skip = diagonalize(family(
        "program 0 expr x\nprogram 1 cerules\nend\nprogram 3 expr x + 2\nopponent s g=0 h=1 r=3\n"), 40);
    REQUIRE(!skip.rules.empty());
    CHECK(skip.rules.front().rule.conclusion.is_bottom());
    bool excised = false;
    for (const auto& e : skip.trace.events) {
        excised = excised || (e.kind == TraceEvent::Kind::kExcision && e.old_axiom == axiom(3));
    }
    CHECK(excised);
}

TEST_CASE("direct branch appends no ce rule") {
    // g swaps odd pairs, so a_{N+1} is listed before a_N when N = 3.
    auto rep = diagonalize(family(
        "program 4 expr x == 0 ? 0 : ((x - 1) ^ 1) + 1\nprogram 1 cerules\nend\n"
        "program 2 expr x + 1\nopponent d g=4 h=1 r=2\n"), 60);
    const StrategyState& st = rep.strategies[0];
    CHECK(st.direct);
    CHECK(st.a_I == std::optional<AxiomId>(axiom(4)));
    CHECK(st.a_J == std::optional<AxiomId>(axiom(3)));
    for (const auto& r : rep.rules) CHECK_FALSE(r.rule.conclusion.is_counterexample());
    CHECK(rep.rules.front().step == "S3");
    // E is empty above R0, so rho is a prefix of the opponent's string: Steps 6 happens.
    CHECK(st.step == StrategyStep::kS7Wait);
    CHECK(rep.verdicts[0].witness == std::optional<AxiomId>(axiom(4)));
}

TEST_CASE("bundled family outcomes") {
    auto rep = diagonalize(bundled(), 5000);
    REQUIRE(rep.verdicts.size() == 6);
    const std::vector<StrategyStep> expected = {
        StrategyStep::kS8Done, StrategyStep::kS5Wait, StrategyStep::kS5Wait,
        StrategyStep::kS5Wait, StrategyStep::kPO2Wait, StrategyStep::kS2Wait};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        CHECK(rep.verdicts[i].step == expected[i]);
    }
    CHECK(rep.verdicts[4].status.has_value());

    // Witnesses checked against the final strings, not the estimator.
    const AxiomSet gamma = range(rep.trace.final_sigma);
    auto ops = bundled();
    Scheduler replay(std::move(ops));
    for (int s = 0; s < 5000; ++s) replay.schedule_stage();
    for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
        CAPTURE(i);
        const auto& v = rep.verdicts[i];
        if (i == 4) continue;  // not a p-system; no witness is promised
        REQUIRE(v.witness);
        CHECK(v.gamma_stable);
        CHECK(v.theta_stable);
        const AxiomSet theta = range(replay.opponents()[i].sigma());
        CHECK(gamma.count(*v.witness) != theta.count(*v.witness));
        CHECK(v.witness->index >= v.N);
        CHECK(v.witness->index <= v.N + 2);
    }
    // Runs are deterministic.
    CHECK(format(rep) == format(replay.report()));
}

TEST_CASE("construction invariants") {
    auto rep = diagonalize(bundled(), 3000);

    SUBCASE("constructed run equals a replay of its final table") {
        QSystem q(table_of(rep.rules, rep.strategies.size()), rep.replacement);
        Runner runner;
        for (std::uint64_t s = 0; s < rep.horizon; ++s) runner.advance(q);
        CHECK(runner.sigma() == rep.trace.final_sigma);

        // The literal oracle is cubic, so it gets a shorter construction.
        auto small = diagonalize(bundled(), 400);
        QSystem sq(table_of(small.rules, small.strategies.size()), small.replacement);
        auto expected = oracle::run(sq.table(), oracle_r(sq.replacement()), small.horizon);
        oracle::Str got;
        for (Token t : small.trace.final_sigma) {
            got.push_back(t.is_gap() ? -1 : static_cast<std::int64_t>(t.axiom().index));
        }
        CHECK(got == expected.back());
    }

    SUBCASE("freshness") {
        for (const auto& act : rep.activations) {
            CAPTURE(act.stage);
            CHECK(act.N > act.mentioned);
            for (const auto& r : rep.rules) {
                if (r.rule.stage < act.stage) CHECK(r.rule.premises.rbegin()->index < act.N);
            }
            for (const auto& earlier : rep.activations) {
                if (earlier.stage < act.stage) CHECK(earlier.N + 2 < act.N);
            }
            const AxiomSet seen = range(rep.trace.sigma_at(act.stage));
            if (!seen.empty()) CHECK(seen.rbegin()->index < act.N);
        }
    }

    SUBCASE("rule discipline") {
        for (const auto& r : rep.rules) {
            if (!r.rule.conclusion.is_counterexample()) continue;
            CHECK(r.step == "S4");
            AxiomSet expect = r.S;
            expect.insert(AxiomId{r.N});
            CHECK(r.rule.premises == expect);
        }
    }

    SUBCASE("finite injury") {
        for (std::size_t j = 0; j < rep.injuries.size(); ++j) {
            for (auto s : rep.injuries[j]) {
                bool caused = false;
                for (std::size_t i = 0; i < j; ++i) {
                    for (auto a : rep.actions[i]) caused = caused || a == s;
                }
                CHECK(caused);
            }
        }
    }

    SUBCASE("hands off") {
        const AxiomSet gamma = range(rep.trace.final_sigma);
        AxiomSet removed;
        for (const auto& st : rep.strategies) {
            CAPTURE(st.index);
            REQUIRE(st.step != StrategyStep::kDeactivated);
            AxiomSet expect;
            for (AxiomId a : below(st.N)) {
                if (!removed.count(a)) expect.insert(a);
            }
            AxiomSet got;
            for (AxiomId a : gamma) {
                if (a.index < st.N) got.insert(a);
            }
            CHECK(got == expect);
            removed.insert(st.Z.begin(), st.Z.end());
        }
    }

    SUBCASE("lower priority never disturbs higher") {
        for (std::size_t i = 0; i + 1 < rep.strategies.size(); ++i) {
            CAPTURE(i);
            QSystem full(table_of(rep.rules, rep.strategies.size()), rep.replacement);
            QSystem mine(table_of(rep.rules, i), rep.replacement);
            Runner a, b;
            const std::size_t keep = rep.strategies[i].N;
            for (std::uint64_t s = 0; s < rep.horizon; ++s) {
                a.advance(full);
                b.advance(mine);
                const std::size_t n = std::min({keep, a.sigma().size(), b.sigma().size()});
                REQUIRE(a.sigma().prefix(n) == b.sigma().prefix(n));
            }
        }
    }
}

TEST_CASE("report text") {
    auto rep = diagonalize(family(kTwoSteps), 40);
    const std::string text = format(rep);
    CHECK(text.find("stage 1: R0 activated N=3\n") != std::string::npos);
    CHECK(text.find("R0 S4 at ") != std::string::npos);
    CHECK(text.find("opponent 0: S5wait witness=a3\n") != std::string::npos);
    CHECK_THROWS_AS(diagonalize(family(kTwoSteps), 0), Error);
}
