// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

namespace dialectic {

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

// r is defined on every index a run of `horizon` stages can reach: expansion
// stays below horizon and each replacement adds at most 3.
std::uint64_t replacement_span(const FuzzParams& p) { return 4 * p.horizon + p.axiom_span + 16; }

}  // namespace

QSystem random_qsystem(std::mt19937_64& rng, const FuzzParams& p) {
    RuleTable table;
    const std::size_t n = 1 + below(rng, p.max_rules);
    for (std::size_t i = 0; i < n; ++i) {
        ConsequenceRule rule;
        rule.stage = below(rng, p.max_stage + 1);
        const std::size_t width = 1 + below(rng, p.max_width);
        for (std::size_t j = 0; j < width; ++j) rule.premises.insert(AxiomId{below(rng, p.axiom_span)});
        switch (below(rng, 5)) {
            case 0:
            case 1: rule.conclusion = Symbol::bottom(); break;
            case 2:
            case 3: rule.conclusion = Symbol::counterexample(); break;
            default: rule.conclusion = Symbol::of(AxiomId{below(rng, p.axiom_span)}); break;
        }
        table.append(std::move(rule));
    }
    ReplacementMap r;
    for (std::uint64_t a = 0; a < replacement_span(p); ++a) {
        r.insert(AxiomId{a}, AxiomId{a + 1 + below(rng, 3)});
    }
    return QSystem(std::move(table), std::move(r));
}

LegacySystem random_legacy(std::mt19937_64& rng, const FuzzParams& p) {
    LegacySystem out;
    out.f_prefix.resize(p.axiom_span);
    std::iota(out.f_prefix.begin(), out.f_prefix.end(), 0);
    std::shuffle(out.f_prefix.begin(), out.f_prefix.end(), rng);
    out.c = below(rng, p.axiom_span);
    do {
        out.c_minus = below(rng, p.axiom_span);
    } while (out.c_minus == out.c);
    if (below(rng, 2)) out.inclusion_stage = 1 + below(rng, p.max_stage);

    const std::size_t n = 1 + below(rng, p.max_rules);
    for (std::size_t i = 0; i < n; ++i) {
        LegacyPair pr;
        pr.stage = 1 + below(rng, p.max_stage);
        const std::size_t width = 1 + below(rng, p.max_width);
        for (std::size_t j = 0; j < width; ++j) pr.F.insert(below(rng, p.axiom_span));
        switch (below(rng, 5)) {
            case 0:
            case 1: pr.x = out.c; break;
            case 2:
            case 3: pr.x = out.c_minus; break;
            default: pr.x = below(rng, p.axiom_span); break;
        }
        out.pairs.push_back(std::move(pr));
    }

    // f^- moves forward in the f-listing and never lands on c^-.
    const bool sanctioned = below(rng, 2) == 0;
    for (std::uint64_t i = 0; i < replacement_span(p); ++i) {
        const std::uint64_t v = out.f(i);
        if (sanctioned && (v == out.c || v == out.c_minus)) continue;
        std::uint64_t y = i + 1 + below(rng, 3);
        while (out.f(y) == out.c_minus) ++y;
        out.f_minus[v] = out.f(y);
    }
    if (sanctioned) {
        out.f_minus[out.c] = out.c_minus;
        out.f_minus[out.c_minus] = out.c;
    }
    return out;
}

AlignmentReport diff_backward(const QSystem& system, std::uint64_t horizon,
                              const LegacyOptions& options) {
    const LegacySystem legacy = backward_translate(system);
    const auto states = run_legacy(legacy, horizon + kBackwardOffset, options);
    return check_alignment(run(system, horizon), states, AlignmentDirection::kBackward, legacy);
}

AlignmentReport diff_forward(const LegacySystem& legacy, std::uint64_t horizon,
                             const LegacyOptions& options) {
    const auto states = run_legacy(legacy, horizon, options);
    const QSystem q = forward_translate(legacy);
    return check_alignment(run(q, horizon), states, AlignmentDirection::kForward, legacy);
}

FuzzSummary fuzz_diff(std::uint64_t seed, std::size_t count, std::uint64_t horizon,
                      const LegacyOptions& options, unsigned jobs) {
    FuzzParams params;
    params.horizon = horizon;
    // System i draws from its own stream, so the corpus does not depend on jobs.
    std::vector<std::string> failures(count);
    std::vector<std::pair<bool, bool>> agreed(count);
    auto work = [&](std::size_t i) {
        std::seed_seq sq{seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(sq);
        const QSystem q = random_qsystem(rng, params);
        const AlignmentReport b = diff_backward(q, horizon, options);
        const LegacySystem l = random_legacy(rng, params);
        const AlignmentReport f = diff_forward(l, horizon, options);
        agreed[i] = {b.agreed, f.agreed};
        if (!b.agreed) failures[i] = "backward #" + std::to_string(i) + ": " + format(b);
        else if (!f.agreed) failures[i] = "forward #" + std::to_string(i) + ": " + format(f);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) work(i);
        });
    }
    for (std::size_t i; (i = next++) < count;) work(i);
    for (auto& t : pool) t.join();

    FuzzSummary out;
    out.systems = count;
    for (std::size_t i = 0; i < count; ++i) {
        out.backward_agreed += agreed[i].first;
        out.forward_agreed += agreed[i].second;
        if (out.first_failure.empty()) out.first_failure = failures[i];
    }
    return out;
}

std::string format(const FuzzSummary& s) {
    std::ostringstream os;
    os << "systems=" << s.systems << " backward_agree=" << s.backward_agreed
       << " forward_agree=" << s.forward_agreed << '\n';
    if (!s.first_failure.empty()) os << s.first_failure;
    return os.str();
}

}  // namespace dialectic
