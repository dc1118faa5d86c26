// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "srcmetry/types.hpp"

namespace srcmetry::linecount {

struct LanguageSyntax {
    std::vector<std::string> line_comment_markers;
    std::vector<std::pair<std::string, std::string>> block_comment_pairs;
    std::string string_delimiters;   // one char per delimiter
    bool backslash_escapes = true;   // \" does not close a string
    bool case_insensitive_markers = false;  // e.g. Batch REM
};

/// Counting table for a language, or nullptr if the language has none
/// registered (such files are excluded from tallies).
const LanguageSyntax* syntax_for(Language lang);

struct LineTally {
    std::int64_t sloc = 0;
    std::int64_t comment_lines = 0;
    std::int64_t blank_lines = 0;
    std::int64_t total_lines = 0;

    LineTally& operator+=(const LineTally& other) {
        sloc += other.sloc;
        comment_lines += other.comment_lines;
        blank_lines += other.blank_lines;
        total_lines += other.total_lines;
        return *this;
    }
};

/// Classify every physical line of `file` as code, comment, or blank. A line
/// holding both code and a comment counts as code. An unterminated block
/// comment leaves the tail counted as comment and appends to `warnings` when
/// given.
LineTally tally_file(const SourceFile& file, const LanguageSyntax& syntax,
                     std::vector<std::string>* warnings = nullptr);

/// Same, classifying raw lines (used by tests and by callers that already
/// hold text).
LineTally tally_lines(const std::vector<std::string>& lines, const LanguageSyntax& syntax,
                      std::vector<std::string>* warnings = nullptr);

struct Aggregate {
    std::map<Language, LineTally> per_language;
    LineTally total;
};

Aggregate aggregate(const std::vector<std::pair<Language, LineTally>>& tallies);

/// comment_lines / sloc. Undefined (nullopt) when sloc == 0; may exceed 1.
std::optional<double> comment_ratio(const LineTally& tally);

}  // namespace srcmetry::linecount
