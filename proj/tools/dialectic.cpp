// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through dialectic.h.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dialectic/dialectic.h"

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

struct UsageError {
    std::string message;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError{"cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError{"cannot write " + path};
    out << text;
}

// Owns a string returned by the library.
struct Text {
    char* p = nullptr;
    ~Text() { dl_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

// Thrown for a failed library call; carries the exit code.
struct CallFailed {
    int code;
};

void check(dl_status st) {
    if (st == DL_OK) return;
    std::size_t line = 0, column = 0;
    const char* msg = dl_last_error(&line, &column);
    std::cerr << "error (" << dl_status_name(st) << "): " << msg << "\n";
    throw CallFailed{st == DL_PARSE ? kUsage : kDomainFailure};
}

using SystemPtr = std::unique_ptr<dl_system, decltype(&dl_system_free)>;
using TracePtr = std::unique_ptr<dl_trace, decltype(&dl_trace_free)>;
using KbPtr = std::unique_ptr<dl_kb, decltype(&dl_kb_free)>;

SystemPtr load_system(const std::string& path) {
    dl_system* s = nullptr;
    check(dl_system_parse(slurp(path).c_str(), &s));
    return SystemPtr(s, dl_system_free);
}

KbPtr load_kb(const std::string& path) {
    dl_kb* kb = nullptr;
    check(dl_kb_parse(slurp(path).c_str(), &kb));
    return KbPtr(kb, dl_kb_free);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) std::cout << text;
    else spill(path, text);
}

struct Options {
    std::string spec;
    std::string input;
    std::uint64_t horizon = 10000;
    std::uint64_t window = 100;
    std::uint64_t diag_window = 0;
    std::uint64_t fuel_cap = 0;
    std::uint64_t bound = 8;
    std::uint64_t seed = 1;
    std::uint64_t fuzz = 0;
    unsigned jobs = 1;
    std::string trace;
    std::string report;
    bool q_mode = false;
    bool stream = false;
};

int cmd_validate(const Options& o) {
    auto sys = load_system(o.spec);
    int passed = 0;
    Text report;
    check(dl_system_validate(sys.get(), o.bound, &passed, &report.p));
    std::cout << report.str();
    return passed ? kOk : kDomainFailure;
}

int cmd_run(const Options& o) {
    auto sys = load_system(o.spec);
    dl_trace* raw = nullptr;
    check(dl_system_run(sys.get(), o.horizon, &raw));
    TracePtr trace(raw, dl_trace_free);
    if (!o.trace.empty()) {
        Text text;
        check(dl_trace_text(trace.get(), &text.p));
        spill(o.trace, text.str());
    }
    Text summary, final_sigma;
    check(dl_trace_summary(trace.get(), std::min(o.window, o.horizon), &summary.p));
    check(dl_trace_final(trace.get(), &final_sigma.p));
    std::cout << summary.str() << "final=" << final_sigma.str() << "\n";
    return kOk;
}

int cmd_diff(const Options& o) {
    int agreed = 0;
    Text report;
    if (o.fuzz > 0) {
        check(dl_fuzz_diff(o.seed, o.fuzz, o.horizon, o.jobs, 0, &agreed, &report.p));
    } else {
        if (o.spec.empty()) throw UsageError{"diff needs a spec file or --fuzz"};
        auto sys = load_system(o.spec);
        check(dl_system_diff(sys.get(), o.horizon, &agreed, &report.p));
    }
    std::cout << report.str();
    return agreed ? kOk : kDomainFailure;
}

int cmd_diagonalize(const Options& o) {
    int settled = 0;
    Text report;
    check(dl_diagonalize(slurp(o.spec).c_str(), o.horizon, o.diag_window, o.fuel_cap, &settled,
                         &report.p));
    emit(o.report, report.str());
    return settled ? kOk : kDomainFailure;
}

int cmd_repair(const Options& o) {
    auto kb = load_kb(o.spec);
    int stable = 0;
    Text report, trace;
    check(dl_kb_repair(kb.get(), o.horizon, std::min(o.window, o.horizon), o.q_mode, &stable,
                       &report.p, &trace.p));
    if (!o.trace.empty()) spill(o.trace, trace.str());
    emit(o.report, report.str());
    return stable ? kOk : kDomainFailure;
}

int cmd_revise(const Options& o) {
    auto kb = load_kb(o.spec);
    int ok = 0;
    Text report, trace;
    check(dl_kb_revise(kb.get(), slurp(o.input).c_str(), o.stream, o.horizon,
                       std::min(o.window, o.horizon), &ok, &report.p, &trace.p));
    if (!o.trace.empty()) spill(o.trace, trace.str());
    emit(o.report, report.str());
    return ok ? kOk : kDomainFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dialectical belief-revision systems: runs, translations, diagonalization and KB repair"};
    app.set_version_flag("--version", std::string(dl_version()));
    app.require_subcommand(1);
    Options o;

    auto horizon = [&](CLI::App* c) {
        c->add_option("--horizon", o.horizon, "Stages to run")->capture_default_str()->check(CLI::PositiveNumber);
    };
    auto window = [&](CLI::App* c) {
        c->add_option("--window", o.window, "Stability window, capped at the horizon")->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "Check the consequence axioms of a system file");
    validate->add_option("spec", o.spec, "System file")->required();
    validate->add_option("--bound", o.bound, "Check subsets of a_0..a_bound")->capture_default_str();

    auto* run = app.add_subcommand("run", "Run a system and summarize its beliefs");
    run->add_option("spec", o.spec, "System file")->required();
    horizon(run);
    window(run);
    run->add_option("--trace", o.trace, "Write the trace here");

    auto* diff = app.add_subcommand("diff", "Compare runs with the legacy formalism");
    diff->add_option("spec", o.spec, "System file");
    horizon(diff);
    diff->add_option("--fuzz", o.fuzz, "Check this many random systems instead");
    diff->add_option("--seed", o.seed, "Seed for --fuzz")->capture_default_str();
    diff->add_option("--jobs", o.jobs, "Threads for --fuzz")->capture_default_str()->check(CLI::PositiveNumber);

    auto* diag = app.add_subcommand("diagonalize", "Build a q-system that defeats every opponent");
    diag->add_option("family", o.spec, "Opponent family file")->required();
    horizon(diag);
    diag->add_option("--window", o.diag_window, "Stability window (0: horizon/4)")->capture_default_str();
    diag->add_option("--fuel-cap", o.fuel_cap, "Largest step budget per call (0: 2^20)")->capture_default_str();
    diag->add_option("--report", o.report, "Write the report here instead of stdout");

    auto* rep = app.add_subcommand("repair", "Extract a consistent subset of a knowledge base");
    rep->add_option("kb", o.spec, "Knowledge base file")->required();
    horizon(rep);
    window(rep);
    rep->add_flag("--q", o.q_mode, "Use replace hints as replacements");
    rep->add_option("--trace", o.trace, "Write the trace here");
    rep->add_option("--report", o.report, "Write the report here instead of stdout");

    auto* rev = app.add_subcommand("revise", "Revise a knowledge base by new items");
    rev->add_option("kb", o.spec, "Knowledge base file")->required();
    rev->add_option("input", o.input, "File declaring the new items")->required();
    horizon(rev);
    window(rev);
    rev->add_flag("--stream", o.stream, "Inject the items one stage apart");
    rev->add_option("--trace", o.trace, "Write the trace here");
    rev->add_option("--report", o.report, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*run) return cmd_run(o);
        if (*diff) return cmd_diff(o);
        if (*diag) return cmd_diagonalize(o);
        if (*rep) return cmd_repair(o);
        if (*rev) return cmd_revise(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kUsage;
    } catch (const CallFailed& e) {
        return e.code;
    }
    return kUsage;
}
