// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/structure.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "srcmetry/linecount.hpp"
#include "srcmetry/util.hpp"

namespace srcmetry::structure {

namespace {

using lexer::Flavor;
using lexer::Token;
using lexer::TokenKind;

std::string join_lines(const std::vector<std::string>& lines) {
    std::string text;
    for (const auto& line : lines) {
        text += line;
        text += '\n';
    }
    return text;
}

// Physical lines belonging to preprocessor directives, including backslash
// continuations. Tokens on these lines are ignored for brace tracking and
// header detection.
std::vector<bool> preproc_lines(const std::vector<std::string>& lines) {
    std::vector<bool> mark(lines.size() + 2, false);
    bool continuation = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        bool is_preproc = continuation;
        if (!continuation) {
            const auto first = line.find_first_not_of(" \t");
            is_preproc = first != std::string::npos && line[first] == '#';
        }
        mark[i + 1] = is_preproc;
        continuation = is_preproc && !line.empty() && line.back() == '\\';
    }
    return mark;
}

bool qualifier_token(const Token& tok) {
    if (tok.kind == TokenKind::Identifier) return true;
    if (tok.kind == TokenKind::Keyword) {
        static const std::unordered_set<std::string_view> allowed = {
            "const", "noexcept", "override", "final", "throw", "volatile", "mutable",
        };
        return allowed.contains(tok.text);
    }
    if (tok.kind == TokenKind::Punct) {
        static const std::unordered_set<std::string_view> allowed = {
            "::", "->", "&", "*", "<", ">", "(", ")", ",", "[", "]", ":", "&&",
        };
        return allowed.contains(tok.text);
    }
    return false;
}

struct BraceSegmenter {
    const std::vector<Token>& toks;
    bool unbalanced = false;

    // Index of the matching close for the open bracket at `start`, or npos.
    std::size_t match(std::size_t start, const char* open, const char* close) const {
        int depth = 0;
        for (std::size_t i = start; i < toks.size(); ++i) {
            if (toks[i].kind != TokenKind::Punct) continue;
            if (toks[i].text == open) {
                ++depth;
            } else if (toks[i].text == close) {
                if (--depth == 0) return i;
            }
        }
        return std::string::npos;
    }

    std::vector<FunctionSpan> run(const std::string& file_name) {
        std::vector<FunctionSpan> spans;
        int depth = 0;
        std::size_t i = 0;
        while (i < toks.size()) {
            const auto& tok = toks[i];
            if (tok.kind == TokenKind::Punct && tok.text == "{") {
                ++depth;
                ++i;
                continue;
            }
            if (tok.kind == TokenKind::Punct && tok.text == "}") {
                if (--depth < 0) unbalanced = true;
                ++i;
                continue;
            }
            if (depth <= 1 && tok.kind == TokenKind::Identifier && i + 1 < toks.size() &&
                toks[i + 1].kind == TokenKind::Punct && toks[i + 1].text == "(") {
                const auto close_paren = match(i + 1, "(", ")");
                if (close_paren != std::string::npos) {
                    std::size_t k = close_paren + 1;
                    std::size_t budget = 24;
                    while (k < toks.size() && budget > 0 && qualifier_token(toks[k])) {
                        ++k;
                        --budget;
                    }
                    if (k < toks.size() && toks[k].kind == TokenKind::Punct &&
                        toks[k].text == "{") {
                        const auto body_end = match(k, "{", "}");
                        if (body_end == std::string::npos) {
                            unbalanced = true;
                            return spans;
                        }
                        FunctionSpan span;
                        span.file = file_name;
                        span.name = tok.text;
                        span.start_line = tok.line;
                        span.end_line = toks[body_end].line;
                        span.tokens.assign(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                           toks.begin() + static_cast<std::ptrdiff_t>(body_end) + 1);
                        spans.push_back(std::move(span));
                        i = body_end + 1;
                        continue;
                    }
                }
            }
            ++i;
        }
        if (depth != 0) unbalanced = true;
        return spans;
    }
};

int indent_width(const std::string& line) {
    int width = 0;
    for (char c : line) {
        if (c == ' ') {
            ++width;
        } else if (c == '\t') {
            width = (width / 8 + 1) * 8;
        } else {
            break;
        }
    }
    return width;
}

bool blank_or_comment(const std::string& line) {
    const auto first = line.find_first_not_of(" \t");
    return first == std::string::npos || line[first] == '#';
}

std::vector<FunctionSpan> segment_python(const SourceFile& file) {
    std::vector<FunctionSpan> spans;
    const auto& lines = file.lines;
    std::size_t i = 0;
    while (i < lines.size()) {
        const auto& line = lines[i];
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) {
            ++i;
            continue;
        }
        std::string_view rest = std::string_view(line).substr(first);
        if (rest.rfind("async ", 0) == 0) rest.remove_prefix(6);
        if (rest.rfind("def", 0) != 0 || rest.size() < 4 ||
            (std::isalnum(static_cast<unsigned char>(rest[3])) || rest[3] == '_')) {
            ++i;
            continue;
        }
        const int def_indent = indent_width(line);
        std::string name;
        for (std::size_t k = 3; k < rest.size() && name.empty(); ++k) {
            if (std::isspace(static_cast<unsigned char>(rest[k]))) continue;
            std::size_t e = k;
            while (e < rest.size() &&
                   (std::isalnum(static_cast<unsigned char>(rest[e])) || rest[e] == '_')) {
                ++e;
            }
            name = std::string(rest.substr(k, e - k));
            break;
        }
        std::size_t end = i;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (blank_or_comment(lines[j])) continue;
            if (indent_width(lines[j]) <= def_indent) break;
            end = j;
        }
        FunctionSpan span;
        span.file = file.rel_path.string();
        span.name = name.empty() ? "<lambda>" : name;
        span.start_line = static_cast<int>(i) + 1;
        span.end_line = static_cast<int>(end) + 1;
        std::vector<std::string> slice(lines.begin() + static_cast<std::ptrdiff_t>(i),
                                       lines.begin() + static_cast<std::ptrdiff_t>(end) + 1);
        span.tokens = lexer::tokenize(join_lines(slice), Flavor::Python);
        for (auto& tok : span.tokens) tok.line += span.start_line - 1;
        spans.push_back(std::move(span));
        i = end + 1;
    }
    return spans;
}

int count_decisions(const std::vector<Token>& tokens, Flavor flavor) {
    static const std::unordered_set<std::string_view> brace_kw = {
        "if", "for", "while", "case", "catch", "foreach",
    };
    static const std::unordered_set<std::string_view> brace_ops = {"?", "&&", "||"};
    static const std::unordered_set<std::string_view> python_kw = {
        "if", "elif", "for", "while", "except", "and", "or",
    };
    int count = 0;
    for (const auto& tok : tokens) {
        if (flavor == Flavor::Python) {
            if (tok.kind == TokenKind::Keyword && python_kw.contains(tok.text)) ++count;
        } else {
            if (tok.kind == TokenKind::Keyword && brace_kw.contains(tok.text)) ++count;
            if (tok.kind == TokenKind::Punct && brace_ops.contains(tok.text)) ++count;
        }
    }
    return count;
}

}  // namespace

std::vector<FunctionSpan> segment_functions(const SourceFile& file,
                                            std::vector<std::string>* warnings) {
    if (!lexer::lexable(file.language)) {
        throw Error(ErrorCode::invalid_argument,
                    fmt::format("cannot segment '{}' files", to_string(file.language)));
    }
    if (file.language == Language::Python) return segment_python(file);

    const auto text = join_lines(file.lines);
    auto all_tokens = lexer::tokenize(text, Flavor::Brace);
    const auto preproc = preproc_lines(file.lines);
    std::vector<Token> tokens;
    tokens.reserve(all_tokens.size());
    for (auto& tok : all_tokens) {
        if (tok.line < static_cast<int>(preproc.size()) && preproc[tok.line]) continue;
        tokens.push_back(std::move(tok));
    }

    BraceSegmenter segmenter{tokens};
    auto spans = segmenter.run(file.rel_path.string());
    if (segmenter.unbalanced) {
        if (warnings != nullptr) {
            warnings->push_back(fmt::format("{}: unbalanced braces; using file-level span",
                                            file.rel_path.string()));
        }
        FunctionSpan whole;
        whole.file = file.rel_path.string();
        whole.name = "<file>";
        whole.start_line = 1;
        whole.end_line = std::max<int>(1, static_cast<int>(file.lines.size()));
        whole.tokens = std::move(tokens);
        return {std::move(whole)};
    }
    return spans;
}

int cyclomatic(const std::vector<Token>& tokens, Flavor flavor) {
    return 1 + count_decisions(tokens, flavor);
}

int cyclomatic(const FunctionSpan& span) {
    // Python spans start at their `def`, lexed as a keyword; brace spans start
    // at the name identifier.
    const bool python = !span.tokens.empty() && span.tokens.front().kind == TokenKind::Keyword &&
                        (span.tokens.front().text == "def" || span.tokens.front().text == "async");
    return cyclomatic(span.tokens, python ? Flavor::Python : Flavor::Brace);
}

std::int64_t cfg_cyclomatic(const ControlFlowGraph& g) {
    return g.edges - g.nodes + 2 * g.components;
}

double halstead_volume(const std::vector<Token>& tokens) {
    if (tokens.empty()) return 0.0;
    std::unordered_set<std::string> operators;
    std::unordered_set<std::string> operands;
    std::int64_t total_operators = 0;
    std::int64_t total_operands = 0;
    for (const auto& tok : tokens) {
        if (lexer::is_operand(tok)) {
            ++total_operands;
            operands.insert(tok.text);
        } else {
            ++total_operators;
            operators.insert(tok.text);
        }
    }
    const double vocabulary = static_cast<double>(operators.size() + operands.size());
    const double length = static_cast<double>(total_operators + total_operands);
    return length * std::log2(vocabulary);
}

double halstead_volume(const FunctionSpan& span) { return halstead_volume(span.tokens); }

double maintainability_index(double v_bar, double m_bar, double sloc_bar) {
    if (!(v_bar > 0.0)) {
        throw Error(ErrorCode::domain, fmt::format("v_bar must be > 0, got {}", v_bar));
    }
    if (!(sloc_bar > 0.0)) {
        throw Error(ErrorCode::domain, fmt::format("sloc_bar must be > 0, got {}", sloc_bar));
    }
    return 100.0 * (171.0 - 5.2 * std::log(v_bar) - 0.23 * m_bar - 16.2 * std::log(sloc_bar)) /
           171.0;
}

std::optional<QualityReport> analyze_sample(const std::vector<const SourceFile*>& files,
                                            unsigned jobs, std::vector<std::string>* warnings) {
    std::vector<const SourceFile*> eligible;
    for (const auto* f : files) {
        if (f != nullptr && lexer::lexable(f->language)) eligible.push_back(f);
    }
    if (eligible.empty()) return std::nullopt;

    struct FileStats {
        std::vector<QualityReport::FunctionCc> functions;
        double volume = 0.0;
        std::int64_t sloc = 0;
        std::vector<std::string> warnings;
    };
    std::vector<FileStats> stats(eligible.size());

    util::parallel_for(eligible.size(), jobs, [&](std::size_t i) {
        const auto& file = *eligible[i];
        auto& st = stats[i];
        auto spans = segment_functions(file, &st.warnings);
        const auto flavor = lexer::flavor_for(file.language);
        for (auto& span : spans) {
            const int cc = cyclomatic(span.tokens, flavor);
            st.functions.push_back({std::move(span), cc});
        }
        const auto tokens = lexer::tokenize(join_lines(file.lines), flavor);
        st.volume = halstead_volume(tokens);
        if (const auto* syntax = linecount::syntax_for(file.language)) {
            st.sloc = linecount::tally_lines(file.lines, *syntax).sloc;
        }
    });

    QualityReport report;
    double volume_sum = 0.0;
    double sloc_sum = 0.0;
    for (auto& st : stats) {
        for (auto& fn : st.functions) report.per_function_cc.push_back(std::move(fn));
        volume_sum += st.volume;
        sloc_sum += static_cast<double>(st.sloc);
        if (warnings != nullptr) {
            warnings->insert(warnings->end(), st.warnings.begin(), st.warnings.end());
        }
    }
    report.modules = static_cast<int>(eligible.size());
    report.avg_halstead_volume = volume_sum / static_cast<double>(eligible.size());
    report.avg_sloc_per_module = sloc_sum / static_cast<double>(eligible.size());
    if (!report.per_function_cc.empty()) {
        std::int64_t cc_sum = 0;
        for (const auto& fn : report.per_function_cc) cc_sum += fn.cc;
        report.avg_cc =
            static_cast<double>(cc_sum) / static_cast<double>(report.per_function_cc.size());
    }
    if (!(report.avg_halstead_volume > 0.0) || !(report.avg_sloc_per_module > 0.0)) {
        return std::nullopt;  // nothing measurable (empty or token-free files)
    }
    report.mi = maintainability_index(report.avg_halstead_volume, report.avg_cc,
                                      report.avg_sloc_per_module);
    report.mi_upper_bound =
        maintainability_index(1.0, report.avg_cc, report.avg_sloc_per_module);
    report.low_maintainability = report.mi < kLowMaintainabilityThreshold;

    std::sort(report.per_function_cc.begin(), report.per_function_cc.end(),
              [](const QualityReport::FunctionCc& a, const QualityReport::FunctionCc& b) {
                  return std::tie(a.span.file, a.span.start_line) <
                         std::tie(b.span.file, b.span.start_line);
              });
    return report;
}

}  // namespace srcmetry::structure
