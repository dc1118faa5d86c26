// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace srcmetry::lexer {

namespace {

const std::unordered_set<std::string_view>& brace_keywords() {
    static const std::unordered_set<std::string_view> kw = {
        "if", "else", "for", "while", "do", "switch", "case", "default", "break",
        "continue", "return", "goto", "try", "catch", "finally", "throw", "throws",
        "new", "delete", "sizeof", "struct", "class", "union", "enum", "typedef",
        "static", "extern", "const", "volatile", "unsigned", "signed", "int", "char",
        "short", "long", "float", "double", "void", "bool", "true", "false", "null",
        "nullptr", "this", "public", "private", "protected", "virtual", "override",
        "template", "typename", "namespace", "using", "operator", "inline", "friend",
        "auto", "register", "function", "var", "let", "foreach", "in", "instanceof",
        "typeof", "implements", "interface", "extends", "import", "package",
        "synchronized", "final", "abstract", "echo", "constexpr", "noexcept",
        "mutable", "explicit", "wchar_t", "restrict",
    };
    return kw;
}

const std::unordered_set<std::string_view>& python_keywords() {
    static const std::unordered_set<std::string_view> kw = {
        "False", "None", "True", "and", "as", "assert", "async", "await", "break",
        "class", "continue", "def", "del", "elif", "else", "except", "finally",
        "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
        "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
    };
    return kw;
}

// Longest first inside each leading-char group.
constexpr std::array<std::string_view, 40> kMultiOps = {
    "<<=", ">>=", "->*", "...", "**=", "//=", ":=",
    "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "??", "=>", "**",
    "<>", "!", "~", "?", ":", ";", ",", ".", "=", "@",
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }
    void advance() {
        if (text[pos] == '\n') ++line;
        ++pos;
    }
    bool starts_with(std::string_view s) const { return text.substr(pos, s.size()) == s; }
    void skip(std::size_t n) {
        for (std::size_t i = 0; i < n && !done(); ++i) advance();
    }
};

void lex_number(Cursor& cur, std::vector<Token>& out) {
    const int line = cur.line;
    std::string text;
    bool hex = false;
    if (cur.peek() == '0' && (cur.peek(1) == 'x' || cur.peek(1) == 'X')) {
        hex = true;
        text += cur.peek();
        cur.advance();
        text += cur.peek();
        cur.advance();
    }
    while (!cur.done()) {
        const char c = cur.peek();
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '\'' || c == '_') {
            // exponent sign
            if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && !hex &&
                (cur.peek(1) == '+' || cur.peek(1) == '-')) {
                text += c;
                cur.advance();
                text += cur.peek();
                cur.advance();
                continue;
            }
            text += c;
            cur.advance();
        } else {
            break;
        }
    }
    out.push_back({TokenKind::Number, std::move(text), line});
}

void lex_string(Cursor& cur, std::vector<Token>& out, bool backslash_escapes) {
    const int line = cur.line;
    const char delim = cur.peek();
    std::string text(1, delim);
    cur.advance();
    while (!cur.done()) {
        const char c = cur.peek();
        if (c == '\n') break;  // unterminated on this line
        text += c;
        cur.advance();
        if (backslash_escapes && c == '\\' && !cur.done() && cur.peek() != '\n') {
            text += cur.peek();
            cur.advance();
            continue;
        }
        if (c == delim) break;
    }
    out.push_back({TokenKind::String, std::move(text), line});
}

void lex_python_triple(Cursor& cur, std::vector<Token>& out, std::string_view delim) {
    const int line = cur.line;
    std::string text(delim);
    cur.skip(3);
    while (!cur.done() && !cur.starts_with(delim)) {
        text += cur.peek();
        cur.advance();
    }
    if (!cur.done()) {
        text += delim;
        cur.skip(3);
    }
    out.push_back({TokenKind::String, std::move(text), line});
}

}  // namespace

Flavor flavor_for(Language lang) {
    return lang == Language::Python ? Flavor::Python : Flavor::Brace;
}

bool lexable(Language lang) {
    switch (lang) {
        case Language::C:
        case Language::Cpp:
        case Language::CSharp:
        case Language::Java:
        case Language::JavaScript:
        case Language::Php:
        case Language::Python:
            return true;
        default:
            return false;
    }
}

std::vector<Token> tokenize(std::string_view text, Flavor flavor) {
    std::vector<Token> out;
    const auto& keywords = flavor == Flavor::Python ? python_keywords() : brace_keywords();
    const bool brace = flavor == Flavor::Brace;
    Cursor cur{text};

    while (!cur.done()) {
        const char c = cur.peek();
        if (std::isspace(static_cast<unsigned char>(c))) {
            cur.advance();
            continue;
        }
        if (brace && cur.starts_with("//")) {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }
        if (brace && cur.starts_with("/*")) {
            cur.skip(2);
            while (!cur.done() && !cur.starts_with("*/")) cur.advance();
            cur.skip(2);
            continue;
        }
        if (!brace && c == '#') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }
        if (brace && c == '#') {
            out.push_back({TokenKind::Preproc, "#", cur.line});
            cur.advance();
            continue;
        }
        if (!brace && (cur.starts_with("\"\"\"") || cur.starts_with("'''"))) {
            lex_python_triple(cur, out, cur.starts_with("\"\"\"") ? "\"\"\"" : "'''");
            continue;
        }
        if (c == '"' || c == '\'') {
            lex_string(cur, out, true);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(cur.peek(1))))) {
            lex_number(cur, out);
            continue;
        }
        if (ident_start(c)) {
            const int line = cur.line;
            std::string word;
            while (!cur.done() && ident_char(cur.peek())) {
                word += cur.peek();
                cur.advance();
            }
            const auto kind =
                keywords.contains(word) ? TokenKind::Keyword : TokenKind::Identifier;
            out.push_back({kind, std::move(word), line});
            continue;
        }
        bool matched = false;
        for (const auto op : kMultiOps) {
            if (op.size() > 1 && cur.starts_with(op)) {
                out.push_back({TokenKind::Punct, std::string(op), cur.line});
                cur.skip(op.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        out.push_back({TokenKind::Punct, std::string(1, c), cur.line});
        cur.advance();
    }
    return out;
}

bool is_operand(const Token& tok) {
    return tok.kind == TokenKind::Identifier || tok.kind == TokenKind::Number ||
           tok.kind == TokenKind::String;
}

bool is_operator(const Token& tok) { return !is_operand(tok); }

}  // namespace srcmetry::lexer
