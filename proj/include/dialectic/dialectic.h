/* Copyright 2026 The Dialectic Authors
 * SPDX-License-Identifier: Apache-2.0 */

/* C interface to libdialectic. Every call returns a dl_status; on failure the
 * message (and, for parse errors, the location) of the most recent error on the
 * calling thread is available from dl_last_error. Strings handed out by the
 * library are NUL-terminated and released with dl_string_free. */

#ifndef DIALECTIC_DIALECTIC_H
#define DIALECTIC_DIALECTIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DL_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DL_API __attribute__((visibility("default")))
#else
#define DL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dl_status {
    DL_OK = 0,
    DL_OUT_OF_RANGE,
    DL_INVALID_REPLACEMENT,
    DL_INVALID_EXCISION,
    DL_PARSE,
    DL_SCHEMA,
    DL_VALIDATION_SCOPE,
    DL_REJECTED_TABLE,
    DL_MISSING_REPLACEMENT,
    DL_CYCLIC_REPLACEMENT,
    DL_INVARIANT,
    DL_DOMAIN,
    DL_TRANSLATION,
    DL_UNDEFINED_POSITION,
    DL_ALIGNMENT_SCOPE,
    DL_REJECTED_INPUT,
    DL_NULL_ARGUMENT,
    DL_INTERNAL
} dl_status;

typedef struct dl_system dl_system;
typedef struct dl_trace dl_trace;
typedef struct dl_kb dl_kb;

DL_API const char* dl_version(void);
DL_API const char* dl_status_name(dl_status status);

/* Message of the last failure on this thread, or "" if none. line and column
 * are 0 unless the failure was a parse error; either pointer may be NULL. */
DL_API const char* dl_last_error(size_t* line, size_t* column);

DL_API void dl_string_free(char* text);

/* Systems. */
DL_API dl_status dl_system_parse(const char* text, dl_system** out);
DL_API void dl_system_free(dl_system* system);
/* Canonical text of the parsed file. */
DL_API dl_status dl_system_print(const dl_system* system, char** out);
/* "d", "p" or "q" as computed from the rules, independent of the tag. */
DL_API dl_status dl_system_variant(const dl_system* system, char** out);
/* Checks the consequence axioms on subsets of a_0..a_bound. */
DL_API dl_status dl_system_validate(const dl_system* system, uint64_t bound, int* passed,
                                    char** report);
/* Fails with DL_DOMAIN when the variant tag forbids a rule in the table. */
DL_API dl_status dl_system_run(const dl_system* system, uint64_t horizon, dl_trace** out);
/* Forward and backward translation, each compared against the direct run. */
DL_API dl_status dl_system_diff(const dl_system* system, uint64_t horizon, int* agreed,
                                char** report);

/* Traces. */
DL_API void dl_trace_free(dl_trace* trace);
DL_API dl_status dl_trace_text(const dl_trace* trace, char** out);
DL_API dl_status dl_trace_summary(const dl_trace* trace, uint64_t window, char** out);
/* Final belief string, e.g. "a2 a1 *". */
DL_API dl_status dl_trace_final(const dl_trace* trace, char** out);

/* Random systems checked in both directions. swap_clauses != 0 corrupts the
 * legacy engine's clause order, for testing the checker. */
DL_API dl_status dl_fuzz_diff(uint64_t seed, uint64_t count, uint64_t horizon, unsigned jobs,
                              int swap_clauses, int* agreed, char** report);

/* Runs the construction against every opponent in the family text. window 0
 * picks horizon / 4. settled is 1 when every opponent got a witness or a
 * status line. */
DL_API dl_status dl_diagonalize(const char* family, uint64_t horizon, uint64_t window,
                                uint64_t fuel_cap, int* settled, char** report);

/* Knowledge bases. */
DL_API dl_status dl_kb_parse(const char* text, dl_kb** out);
DL_API void dl_kb_free(dl_kb* kb);
/* q_mode != 0 turns replace hints into replacements. stable reports whether the
 * final window was clean. trace may be NULL. */
DL_API dl_status dl_kb_repair(const dl_kb* kb, uint64_t horizon, uint64_t window, int q_mode,
                              int* stable, char** report, char** trace);
/* input declares new items after the KB. With stream == 0 it must declare
 * exactly one. ok is 0 for rejected or inconsistent input or an unstable run. */
DL_API dl_status dl_kb_revise(const dl_kb* kb, const char* input, int stream, uint64_t horizon,
                              uint64_t window, int* ok, char** report, char** trace);

#ifdef __cplusplus
}
#endif

#endif /* DIALECTIC_DIALECTIC_H */
