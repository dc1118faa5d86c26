// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "srcmetry/types.hpp"

namespace srcmetry::lexer {

enum class TokenKind {
    Identifier,
    Keyword,
    Number,
    String,     // string or character literal
    Punct,      // operators and punctuation, multi-char ops joined
    Preproc,    // leading '#' of a preprocessor directive (C family)
};

struct Token {
    TokenKind kind;
    std::string text;
    int line = 1;  // 1-based physical line
};

/// Token stream flavor. Brace covers C, C++, C#, Java, JavaScript, PHP.
enum class Flavor { Brace, Python };

Flavor flavor_for(Language lang);

/// True for languages this lexer understands (brace family or Python).
bool lexable(Language lang);

/// Tokenize source text, dropping comments and whitespace. Keywords are the
/// union of the brace-family (or Python) control/declaration words.
std::vector<Token> tokenize(std::string_view text, Flavor flavor);

bool is_operand(const Token& tok);   // identifiers and literals
bool is_operator(const Token& tok);  // keywords, punctuation, preproc

}  // namespace srcmetry::lexer
