// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/dialectic.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "dialectic/applications.hpp"
#include "dialectic/diagonalizer.hpp"
#include "dialectic/error.hpp"
#include "dialectic/fuzz.hpp"
#include "dialectic/system_spec.hpp"

using namespace dialectic;

struct dl_system {
    SystemSpec spec;
};

struct dl_trace {
    RunTrace trace;
    Variant variant;
};

struct dl_kb {
    KnowledgeBase kb;
};

namespace {

struct LastError {
    std::string message;
    std::size_t line = 0;
    std::size_t column = 0;
};

thread_local LastError last_error;

dl_status fail(dl_status status, std::string message, std::size_t line = 0, std::size_t column = 0) {
    last_error = {std::move(message), line, column};
    return status;
}

dl_status status_of(ErrorCode code) {
    // The enums list the codes in the same order.
    return static_cast<dl_status>(static_cast<int>(code) + 1);
}

// Runs fn, mapping exceptions onto status codes.
template <class Fn>
dl_status guarded(Fn&& fn) {
    try {
        last_error = {};
        fn();
        return DL_OK;
    } catch (const ParseError& e) {
        return fail(DL_PARSE, e.what(), e.line(), e.column());
    } catch (const Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DL_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DL_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set(char** out, const std::string& s) {
    if (out) *out = dup(s);
}

#define DL_REQUIRE(ptr) \
    if (!(ptr)) return fail(DL_NULL_ARGUMENT, #ptr " is null")

}  // namespace

extern "C" {

const char* dl_version(void) { return "0.1.0"; }

const char* dl_status_name(dl_status status) {
    switch (status) {
    case DL_OK: return "ok";
    case DL_NULL_ARGUMENT: return "null-argument";
    case DL_INTERNAL: return "internal";
    default: break;
    }
    if (status > DL_OK && status < DL_NULL_ARGUMENT) {
        return to_string(static_cast<ErrorCode>(static_cast<int>(status) - 1));
    }
    return "unknown";
}

const char* dl_last_error(size_t* line, size_t* column) {
    if (line) *line = last_error.line;
    if (column) *column = last_error.column;
    return last_error.message.c_str();
}

void dl_string_free(char* text) { std::free(text); }

dl_status dl_system_parse(const char* text, dl_system** out) {
    DL_REQUIRE(text);
    DL_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new dl_system{parse_system_spec(text)}; });
}

void dl_system_free(dl_system* system) { delete system; }

dl_status dl_system_print(const dl_system* system, char** out) {
    DL_REQUIRE(system);
    DL_REQUIRE(out);
    return guarded([&] { set(out, print(system->spec)); });
}

dl_status dl_system_variant(const dl_system* system, char** out) {
    DL_REQUIRE(system);
    DL_REQUIRE(out);
    return guarded([&] {
        const QSystem q(system->spec.rules, system->spec.replacement);
        set(out, to_string(classify_variant(q).variant));
    });
}

dl_status dl_system_validate(const dl_system* system, uint64_t bound, int* passed, char** report) {
    DL_REQUIRE(system);
    DL_REQUIRE(passed);
    return guarded([&] {
        const ValidationReport r = validate_aco(system->spec.rules, bound);
        *passed = r.passed ? 1 : 0;
        set(report, format(r));
    });
}

dl_status dl_system_run(const dl_system* system, uint64_t horizon, dl_trace** out) {
    DL_REQUIRE(system);
    DL_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const QSystem q = to_system(system->spec);
        *out = new dl_trace{run(q, horizon), classify_variant(q).variant};
    });
}

dl_status dl_system_diff(const dl_system* system, uint64_t horizon, int* agreed, char** report) {
    DL_REQUIRE(system);
    DL_REQUIRE(agreed);
    return guarded([&] {
        const QSystem q = to_system(system->spec);
        const AlignmentReport b = diff_backward(q, horizon);
        const AlignmentReport f = diff_forward(backward_translate(q), horizon);
        *agreed = b.agreed && f.agreed ? 1 : 0;
        set(report, "backward: " + format(b) + "forward: " + format(f));
    });
}

void dl_trace_free(dl_trace* trace) { delete trace; }

dl_status dl_trace_text(const dl_trace* trace, char** out) {
    DL_REQUIRE(trace);
    DL_REQUIRE(out);
    return guarded([&] { set(out, format_trace(trace->trace)); });
}

dl_status dl_trace_summary(const dl_trace* trace, uint64_t window, char** out) {
    DL_REQUIRE(trace);
    DL_REQUIRE(out);
    return guarded([&] {
        if (window > trace->trace.horizon) {
            throw Error(ErrorCode::kDomain, "window exceeds the horizon");
        }
        set(out, std::string("variant=") + to_string(trace->variant) + "\n" +
                     format(estimate_beliefs(trace->trace, window)));
    });
}

dl_status dl_trace_final(const dl_trace* trace, char** out) {
    DL_REQUIRE(trace);
    DL_REQUIRE(out);
    return guarded([&] { set(out, format(trace->trace.final_sigma)); });
}

dl_status dl_fuzz_diff(uint64_t seed, uint64_t count, uint64_t horizon, unsigned jobs,
                       int swap_clauses, int* agreed, char** report) {
    DL_REQUIRE(agreed);
    return guarded([&] {
        LegacyOptions options;
        options.swap_clause_priority = swap_clauses != 0;
        const FuzzSummary s = fuzz_diff(seed, count, horizon, options, jobs);
        *agreed = s.backward_agreed == s.systems && s.forward_agreed == s.systems ? 1 : 0;
        set(report, format(s));
    });
}

dl_status dl_diagonalize(const char* family, uint64_t horizon, uint64_t window, uint64_t fuel_cap,
                         int* settled, char** report) {
    DL_REQUIRE(family);
    DL_REQUIRE(settled);
    return guarded([&] {
        DiagonalizerOptions options;
        options.window = window;
        if (fuel_cap != 0) options.fuel_cap = fuel_cap;
        const DiagonalizationReport r = diagonalize(instantiate(parse_family(family)), horizon, options);
        *settled = 1;
        for (const auto& v : r.verdicts) {
            if (!v.witness && !v.status) *settled = 0;
        }
        set(report, format(r));
    });
}

dl_status dl_kb_parse(const char* text, dl_kb** out) {
    DL_REQUIRE(text);
    DL_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new dl_kb{parse_kb(text)}; });
}

void dl_kb_free(dl_kb* kb) { delete kb; }

dl_status dl_kb_repair(const dl_kb* kb, uint64_t horizon, uint64_t window, int q_mode, int* stable,
                       char** report, char** trace) {
    DL_REQUIRE(kb);
    DL_REQUIRE(stable);
    return guarded([&] {
        const RepairResult r = repair(kb->kb, horizon, window, q_mode ? RepairMode::kQ : RepairMode::kD);
        *stable = r.stable ? 1 : 0;
        set(report, format(kb->kb, r));
        set(trace, format_trace(r.trace));
    });
}

dl_status dl_kb_revise(const dl_kb* kb, const char* input, int stream, uint64_t horizon,
                       uint64_t window, int* ok, char** report, char** trace) {
    DL_REQUIRE(kb);
    DL_REQUIRE(input);
    DL_REQUIRE(ok);
    return guarded([&] {
        const KnowledgeBase in = parse_kb_extension(kb->kb, input);
        const RevisionResult r = stream ? revise_stream(kb->kb, in, horizon, window)
                                        : revise(kb->kb, in, horizon, window);
        *ok = r.stable && !r.rejected && !r.inconsistent_input ? 1 : 0;
        set(report, format(in, r));
        set(trace, format_trace(r.trace));
    });
}

}  // extern "C"
