// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

// Small line/word helpers shared by the text formats.

#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dialectic::detail {

inline bool parse_u64(std::string_view text, std::uint64_t& out) {
    if (text.empty()) return false;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

inline std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
        if (j > i) out.push_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

/// A word together with its 1-based column, for diagnostics.
struct Word {
    std::string_view text;
    std::size_t column;
};

inline std::vector<Word> split_words(std::string_view line) {
    std::vector<Word> out;
    for (std::string_view w : split_ws(line)) {
        out.push_back(Word{w, static_cast<std::size_t>(w.data() - line.data()) + 1});
    }
    return out;
}

/// Splits on '\n', strips '#' comments. Line numbers are the vector index + 1.
inline std::vector<std::string_view> logical_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        out.push_back(line);
        if (nl == text.size()) break;
        start = nl + 1;
    }
    return out;
}

}  // namespace dialectic::detail
