// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "dialectic/error.hpp"
#include "dialectic/system_spec.hpp"
#include "doctest.h"

using namespace dialectic;

namespace {

std::pair<std::size_t, std::size_t> where(const char* text) {
    try {
        parse_system_spec(text);
    } catch (const ParseError& e) {
        return {e.line(), e.column()};
    }
    return {0, 0};
}

}  // namespace

TEST_CASE("system spec round trip") {
    std::ifstream in(DIALECTIC_SOURCE_DIR "/data/scenario.sys");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const SystemSpec spec = parse_system_spec(text);
    CHECK(print(spec) == text);
    CHECK(spec.tag() == Variant::kP);
    CHECK(spec.axioms == std::optional<std::uint64_t>(3));
    CHECK(spec.rules.size() == 1);
    CHECK(spec.replacement.at(axiom(0)) == std::optional<AxiomId>(axiom(2)));

    CHECK(print(parse_system_spec("")).empty());
    const char* messy = "# q system\n\n[rules]\nat 2 :   a1 a0 |- BOT # late\n[replacement]\n a3  ->  a4\n";
    const std::string canon = print(parse_system_spec(messy));
    CHECK(canon == "[rules]\nat 2 : a0 a1 |- BOT\n[replacement]\na3 -> a4\n");
    CHECK(print(parse_system_spec(canon)) == canon);
}

TEST_CASE("system spec errors") {
    CHECK(where("variant x\n") == std::make_pair(std::size_t{1}, std::size_t{9}));
    CHECK(where("[rules]\nat 0 : a1 |- XX\n").first == 2);
    CHECK(where("[replacement]\na1 => a2\n") == std::make_pair(std::size_t{2}, std::size_t{1}));
    CHECK(where("[replacement]\n[rules]\n") == std::make_pair(std::size_t{2}, std::size_t{1}));
    CHECK(where("colour blue\n") == std::make_pair(std::size_t{1}, std::size_t{1}));
    CHECK(where("[replacement]\na1 -> a2\na1 -> a3\n").first == 3);
    CHECK_THROWS_AS(parse_system_spec("[replacement]\na1 -> a2\na2 -> a1\n"), Error);
}

TEST_CASE("variant tag is enforced") {
    CHECK_THROWS_AS(to_system(parse_system_spec("variant p\n[rules]\nat 0 : a1 |- BOT\n")), Error);
    CHECK_THROWS_AS(to_system(parse_system_spec("variant d\n[rules]\nat 0 : a1 |- CE\n")), Error);
    CHECK_NOTHROW(to_system(parse_system_spec("[rules]\nat 0 : a1 |- CE\nat 0 : a2 |- BOT\n")));
    try {
        to_system(parse_system_spec("variant p\n[rules]\nat 0 : a1 |- BOT\n"));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kDomain);
    }
}
