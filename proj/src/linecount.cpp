// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/linecount.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

namespace srcmetry::linecount {

namespace {

LanguageSyntax make_c_family() {
    return {{"//"}, {{"/*", "*/"}}, "\"'", true, false};
}

const LanguageSyntax* registry(Language lang) {
    static const LanguageSyntax c_family = make_c_family();
    static const LanguageSyntax assembly{{";"}, {}, "\"'", false, false};
    static const LanguageSyntax hash_line{{"#"}, {}, "\"'", true, false};
    static const LanguageSyntax make_syntax{{"#"}, {}, "", false, false};
    static const LanguageSyntax pascal{{"//"}, {{"{", "}"}, {"(*", "*)"}}, "'", false, false};
    static const LanguageSyntax visual_basic{{"'"}, {}, "\"", false, false};
    static const LanguageSyntax markup{{}, {{"<!--", "-->"}}, "\"'", false, false};
    static const LanguageSyntax css{{}, {{"/*", "*/"}}, "\"'", true, false};
    static const LanguageSyntax sql{{"--"}, {{"/*", "*/"}}, "'", false, false};
    static const LanguageSyntax batch{{"REM", "::"}, {}, "\"", false, true};
    static const LanguageSyntax asp{{"'"}, {{"<!--", "-->"}}, "\"", false, false};

    switch (lang) {
        case Language::C:
        case Language::Cpp:
        case Language::CSharp:
        case Language::Java:
        case Language::JavaScript:
        case Language::Php:
            return &c_family;
        case Language::Assembly:
            return &assembly;
        case Language::Shell:
        case Language::Python:
            return &hash_line;
        case Language::Make:
            return &make_syntax;
        case Language::Pascal:
            return &pascal;
        case Language::VisualBasic:
            return &visual_basic;
        case Language::Html:
        case Language::Xml:
            return &markup;
        case Language::Css:
            return &css;
        case Language::Sql:
            return &sql;
        case Language::Batch:
            return &batch;
        case Language::Asp:
            return &asp;
        case Language::Other:
        case Language::Unknown:
            return nullptr;
    }
    return nullptr;
}

bool marker_at(const std::string& line, std::size_t pos, const std::string& marker,
               bool case_insensitive) {
    if (pos + marker.size() > line.size()) return false;
    for (std::size_t k = 0; k < marker.size(); ++k) {
        char a = line[pos + k];
        char b = marker[k];
        if (case_insensitive) {
            a = static_cast<char>(std::toupper(static_cast<unsigned char>(a)));
            b = static_cast<char>(std::toupper(static_cast<unsigned char>(b)));
        }
        if (a != b) return false;
    }
    // word markers (REM) must not match identifier prefixes (REMOVE)
    if (std::isalpha(static_cast<unsigned char>(marker.back())) &&
        pos + marker.size() < line.size() &&
        std::isalnum(static_cast<unsigned char>(line[pos + marker.size()]))) {
        return false;
    }
    return true;
}

enum class LineClass { Blank, Comment, Code };

struct Classifier {
    const LanguageSyntax& syntax;
    int open_block = -1;  // index into block_comment_pairs, -1 when outside

    LineClass classify(const std::string& line) {
        bool has_code = false;
        bool has_comment = false;
        char string_delim = 0;  // string state never crosses lines
        std::size_t i = 0;
        while (i < line.size()) {
            if (open_block >= 0) {
                has_comment = true;
                const auto& close = syntax.block_comment_pairs[open_block].second;
                const auto pos = line.find(close, i);
                if (pos == std::string::npos) {
                    i = line.size();
                } else {
                    i = pos + close.size();
                    open_block = -1;
                }
                continue;
            }
            const char c = line[i];
            if (string_delim != 0) {
                has_code = true;
                if (syntax.backslash_escapes && c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == string_delim) string_delim = 0;
                ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            bool matched = false;
            for (std::size_t b = 0; b < syntax.block_comment_pairs.size(); ++b) {
                if (marker_at(line, i, syntax.block_comment_pairs[b].first,
                              syntax.case_insensitive_markers)) {
                    open_block = static_cast<int>(b);
                    i += syntax.block_comment_pairs[b].first.size();
                    has_comment = true;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            for (const auto& marker : syntax.line_comment_markers) {
                if (marker_at(line, i, marker, syntax.case_insensitive_markers)) {
                    has_comment = true;
                    i = line.size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (syntax.string_delimiters.find(c) != std::string::npos) {
                string_delim = c;
                has_code = true;
                ++i;
                continue;
            }
            has_code = true;
            ++i;
        }
        if (has_code) return LineClass::Code;
        if (has_comment) return LineClass::Comment;
        return LineClass::Blank;
    }
};

}  // namespace

const LanguageSyntax* syntax_for(Language lang) { return registry(lang); }

LineTally tally_lines(const std::vector<std::string>& lines, const LanguageSyntax& syntax,
                      std::vector<std::string>* warnings) {
    LineTally tally;
    Classifier classifier{syntax};
    for (const auto& line : lines) {
        switch (classifier.classify(line)) {
            case LineClass::Blank: ++tally.blank_lines; break;
            case LineClass::Comment: ++tally.comment_lines; break;
            case LineClass::Code: ++tally.sloc; break;
        }
        ++tally.total_lines;
    }
    if (classifier.open_block >= 0 && warnings != nullptr) {
        warnings->push_back(fmt::format(
            "unterminated block comment ('{}' without '{}'); trailing lines counted as comment",
            syntax.block_comment_pairs[classifier.open_block].first,
            syntax.block_comment_pairs[classifier.open_block].second));
    }
    return tally;
}

LineTally tally_file(const SourceFile& file, const LanguageSyntax& syntax,
                     std::vector<std::string>* warnings) {
    std::vector<std::string> local;
    auto tally = tally_lines(file.lines, syntax, warnings != nullptr ? &local : nullptr);
    if (warnings != nullptr) {
        for (auto& w : local) {
            warnings->push_back(fmt::format("{}: {}", file.rel_path.string(), w));
        }
    }
    return tally;
}

Aggregate aggregate(const std::vector<std::pair<Language, LineTally>>& tallies) {
    Aggregate agg;
    for (const auto& [lang, tally] : tallies) {
        agg.per_language[lang] += tally;
        agg.total += tally;
    }
    return agg;
}

std::optional<double> comment_ratio(const LineTally& tally) {
    if (tally.sloc <= 0) return std::nullopt;
    return static_cast<double>(tally.comment_lines) / static_cast<double>(tally.sloc);
}

}  // namespace srcmetry::linecount
