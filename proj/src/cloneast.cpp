// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/cloneast.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "srcmetry/lexer.hpp"
#include "srcmetry/util.hpp"

namespace srcmetry::cloneast {

namespace {

using lexer::Token;
using lexer::TokenKind;

constexpr std::string_view kKindNames[] = {
    "translation-unit", "function-def", "param-list", "param", "block", "if", "else",
    "for", "while", "do-while", "switch", "case", "default", "return", "break",
    "continue", "goto", "label", "expr-statement", "decl", "declarator", "init-list",
    "type-name", "assign", "ternary", "binary-op", "unary-op", "postfix-op", "call",
    "arg-list", "index", "member", "cast", "paren", "identifier", "literal",
    "string-literal", "sizeof", "preproc", "struct", "enum", "typedef", "try", "catch",
    "namespace", "using", "empty", "unknown",
};
static_assert(std::size(kKindNames) == kNodeKindCount);

const std::unordered_set<std::string_view>& type_keywords() {
    static const std::unordered_set<std::string_view> kw = {
        "int",    "char",     "short",  "long",   "float",   "double", "void",
        "bool",   "unsigned", "signed", "const",  "volatile", "static", "extern",
        "register", "auto",   "struct", "union",  "enum",    "wchar_t", "mutable",
        "typename", "inline", "constexpr", "restrict",
    };
    return kw;
}

const std::unordered_set<std::string_view>& assign_ops() {
    static const std::unordered_set<std::string_view> ops = {
        "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
    };
    return ops;
}

// Binary operator precedence; higher binds tighter.
int binary_precedence(const std::string& op) {
    static const std::unordered_map<std::string_view, int> prec = {
        {"||", 1}, {"&&", 2}, {"|", 3}, {"^", 4}, {"&", 5},
        {"==", 6}, {"!=", 6},
        {"<", 7},  {">", 7},  {"<=", 7}, {">=", 7},
        {"<<", 8}, {">>", 8},
        {"+", 9},  {"-", 9},
        {"*", 10}, {"/", 10}, {"%", 10},
    };
    const auto it = prec.find(op);
    return it == prec.end() ? 0 : it->second;
}

std::unique_ptr<SyntaxNode> make_node(NodeKind kind, int line) {
    auto node = std::make_unique<SyntaxNode>();
    node->kind = kind;
    node->start_line = line;
    node->end_line = line;
    return node;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ParseResult run() {
        ParseResult result;
        auto root = make_node(NodeKind::TranslationUnit, toks_.empty() ? 1 : toks_.front().line);
        while (!done()) {
            const auto before = pos_;
            root->add(parse_external());
            if (pos_ == before) {  // safety net: always make progress
                root->add(unknown_sync());
            }
        }
        finalize(*root);
        result.total_tokens = static_cast<int>(toks_.size());
        result.unknown_tokens = unknown_tokens_;
        result.root = std::move(root);
        return result;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int unknown_tokens_ = 0;
    int depth_ = 0;

    // Nesting cap: beyond it the remainder of the construct is swallowed as
    // Unknown instead of recursing further.
    static constexpr int kMaxDepth = 400;

    struct DepthGuard {
        int& depth;
        explicit DepthGuard(int& d) : depth(d) { ++depth; }
        ~DepthGuard() { --depth; }
    };

    bool done() const { return pos_ >= toks_.size(); }
    const Token& cur() const { return toks_[pos_]; }
    const Token* peek(std::size_t ahead = 1) const {
        return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
    }
    int cur_line() const { return done() ? last_line() : cur().line; }
    int last_line() const { return toks_.empty() ? 1 : toks_.back().line; }

    bool at_punct(std::string_view text) const {
        return !done() && cur().kind == TokenKind::Punct && cur().text == text;
    }
    bool at_keyword(std::string_view text) const {
        return !done() && cur().kind == TokenKind::Keyword && cur().text == text;
    }

    void eat(SyntaxNode& owner) {
        owner.own_tokens += 1;
        owner.end_line = std::max(owner.end_line, cur().line);
        ++pos_;
    }
    bool eat_punct(SyntaxNode& owner, std::string_view text) {
        if (!at_punct(text)) return false;
        eat(owner);
        return true;
    }

    // Recompute token_count/own_tokens bottom-up and widen line spans.
    static void finalize(SyntaxNode& node) {
        int children_tokens = 0;
        for (auto& child : node.children) {
            finalize(*child);
            children_tokens += child->token_count;
            node.start_line = std::min(node.start_line, child->start_line);
            node.end_line = std::max(node.end_line, child->end_line);
        }
        node.token_count = node.own_tokens + children_tokens;
    }

    std::unique_ptr<SyntaxNode> unknown_sync() {
        auto node = make_node(NodeKind::Unknown, cur_line());
        // swallow tokens until a statement boundary
        while (!done()) {
            const bool stop_after = at_punct(";") || at_punct("}");
            ++unknown_tokens_;
            eat(*node);
            if (stop_after) break;
        }
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_preproc() {
        auto node = make_node(NodeKind::Preproc, cur_line());
        const int line = cur().line;
        while (!done() && cur().line == line) eat(*node);
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_external() {
        DepthGuard guard(depth_);
        if (depth_ > kMaxDepth) return unknown_sync();
        if (cur().kind == TokenKind::Preproc) return parse_preproc();
        if (at_punct(";")) {
            auto node = make_node(NodeKind::Empty, cur_line());
            eat(*node);
            return node;
        }
        if (at_punct("}")) return unknown_sync();  // stray close
        if (at_keyword("typedef")) return parse_typedef();
        if (at_keyword("namespace")) return parse_namespace();
        if (at_keyword("using")) return parse_using();
        if (at_keyword("template")) return parse_template_prefix();
        if (at_keyword("struct") || at_keyword("class") || at_keyword("union") ||
            at_keyword("enum")) {
            // Distinguish a tag definition from `struct X var;` declarations:
            // a definition has `{` before any `;`.
            if (tag_defines_body()) return parse_tag();
        }
        if (auto fn = try_parse_function()) return fn;
        if (looks_like_decl()) return parse_decl();
        // Fall back to an expression statement; anything stranger becomes
        // an unknown node.
        if (cur().kind == TokenKind::Identifier || cur().kind == TokenKind::Number ||
            cur().kind == TokenKind::String || at_punct("(")) {
            return parse_expr_statement();
        }
        return unknown_sync();
    }

    bool tag_defines_body() const {
        for (std::size_t i = pos_; i < toks_.size(); ++i) {
            const auto& t = toks_[i];
            if (t.kind != TokenKind::Punct) continue;
            if (t.text == "{") return true;
            if (t.text == ";" || t.text == "(" || t.text == "=") return false;
        }
        return false;
    }

    std::unique_ptr<SyntaxNode> parse_typedef() {
        auto node = make_node(NodeKind::Typedef, cur_line());
        eat(*node);  // typedef
        if ((at_keyword("struct") || at_keyword("union") || at_keyword("enum")) &&
            tag_defines_body()) {
            node->add(parse_tag());
            while (!done() && !at_punct(";")) eat(*node);
            eat_punct(*node, ";");
            return node;
        }
        while (!done() && !at_punct(";")) eat(*node);
        eat_punct(*node, ";");
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_namespace() {
        auto node = make_node(NodeKind::Namespace, cur_line());
        eat(*node);  // namespace
        while (!done() && !at_punct("{") && !at_punct(";")) eat(*node);
        if (eat_punct(*node, "{")) {
            while (!done() && !at_punct("}")) {
                const auto before = pos_;
                node->add(parse_external());
                if (pos_ == before) node->add(unknown_sync());
            }
            eat_punct(*node, "}");
        } else {
            eat_punct(*node, ";");
        }
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_using() {
        auto node = make_node(NodeKind::Using, cur_line());
        while (!done() && !at_punct(";")) eat(*node);
        eat_punct(*node, ";");
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_template_prefix() {
        // Consume `template <...>` and attach the following external.
        auto node = make_node(NodeKind::TypeName, cur_line());
        eat(*node);  // template
        if (at_punct("<")) {
            int depth = 0;
            while (!done()) {
                if (at_punct("<")) ++depth;
                if (at_punct(">") && --depth == 0) {
                    eat(*node);
                    break;
                }
                eat(*node);
            }
        }
        if (!done()) node->add(parse_external());
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_tag() {
        auto node = make_node(at_keyword("enum") ? NodeKind::Enum : NodeKind::Struct, cur_line());
        eat(*node);  // struct/class/union/enum
        while (!done() && !at_punct("{") && !at_punct(";")) eat(*node);
        if (eat_punct(*node, "{")) {
            if (node->kind == NodeKind::Enum) {
                while (!done() && !at_punct("}")) eat(*node);
            } else {
                while (!done() && !at_punct("}")) {
                    const auto before = pos_;
                    node->add(parse_external());
                    if (pos_ == before) node->add(unknown_sync());
                }
            }
            eat_punct(*node, "}");
        }
        // trailing declarators up to `;` belong to the enclosing context
        return node;
    }

    // ---- function definitions -------------------------------------------

    bool qualifier_after_params(std::size_t i) const {
        const auto& t = toks_[i];
        if (t.kind == TokenKind::Identifier) return true;
        if (t.kind == TokenKind::Keyword) {
            return t.text == "const" || t.text == "noexcept" || t.text == "override" ||
                   t.text == "final" || t.text == "throw" || t.text == "volatile";
        }
        if (t.kind == TokenKind::Punct) {
            static const std::unordered_set<std::string_view> ok = {
                "::", "->", "&", "*", "<", ">", "(", ")", ",", "[", "]", ":", "&&",
            };
            return ok.contains(t.text);
        }
        return false;
    }

    std::size_t matching(std::size_t open, std::string_view open_text,
                         std::string_view close_text) const {
        int depth = 0;
        for (std::size_t i = open; i < toks_.size(); ++i) {
            if (toks_[i].kind != TokenKind::Punct) continue;
            if (toks_[i].text == open_text) ++depth;
            else if (toks_[i].text == close_text && --depth == 0) return i;
        }
        return std::string_view::npos;
    }

    // A function definition looks like: type-ish tokens, name, `(`params`)`,
    // optional qualifiers, `{`. Returns the header shape or nothing.
    struct FunctionShape {
        std::size_t name;
        std::size_t open_paren;
        std::size_t close_paren;
        std::size_t open_brace;
    };

    std::optional<FunctionShape> function_shape() const {
        std::size_t i = pos_;
        std::size_t last_ident = std::string_view::npos;
        // scan the type/name prefix
        while (i < toks_.size()) {
            const auto& t = toks_[i];
            if (t.kind == TokenKind::Identifier) {
                last_ident = i;
                ++i;
                continue;
            }
            if (t.kind == TokenKind::Keyword && type_keywords().contains(t.text)) {
                ++i;
                continue;
            }
            if (t.kind == TokenKind::Punct &&
                (t.text == "*" || t.text == "&" || t.text == "::" || t.text == "<" ||
                 t.text == ">" || t.text == "~")) {
                ++i;
                continue;
            }
            break;
        }
        if (last_ident == std::string_view::npos || i != last_ident + 1) return std::nullopt;
        if (i >= toks_.size() || toks_[i].kind != TokenKind::Punct || toks_[i].text != "(") {
            return std::nullopt;
        }
        const auto close = matching(i, "(", ")");
        if (close == std::string_view::npos) return std::nullopt;
        std::size_t k = close + 1;
        std::size_t budget = 24;
        while (k < toks_.size() && budget > 0 && qualifier_after_params(k)) {
            ++k;
            --budget;
        }
        if (k >= toks_.size() || toks_[k].kind != TokenKind::Punct || toks_[k].text != "{") {
            return std::nullopt;
        }
        return FunctionShape{last_ident, i, close, k};
    }

    std::unique_ptr<SyntaxNode> try_parse_function() {
        const auto shape = function_shape();
        if (!shape) return nullptr;
        auto node = make_node(NodeKind::FunctionDef, cur_line());
        if (shape->name > pos_) {
            auto type = make_node(NodeKind::TypeName, cur_line());
            while (pos_ < shape->name) eat(*type);
            node->add(std::move(type));
        }
        eat(*node);  // function name
        node->add(parse_param_list(shape->close_paren));
        while (pos_ < shape->open_brace) eat(*node);  // trailing qualifiers
        node->add(parse_block());
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_param_list(std::size_t close_paren) {
        auto params = make_node(NodeKind::ParamList, cur_line());
        eat(*params);  // (
        while (pos_ < close_paren) {
            auto param = make_node(NodeKind::Param, cur_line());
            int depth = 0;
            while (pos_ < close_paren) {
                if (at_punct("(")) ++depth;
                if (at_punct(")")) --depth;
                if (depth == 0 && at_punct(",")) break;
                eat(*param);
            }
            if (param->own_tokens > 0) params->add(std::move(param));
            if (pos_ < close_paren) eat(*params);  // ,
        }
        eat_punct(*params, ")");
        return params;
    }

    // ---- statements -------------------------------------------------------

    std::unique_ptr<SyntaxNode> parse_block() {
        auto block = make_node(NodeKind::Block, cur_line());
        eat(*block);  // {
        while (!done() && !at_punct("}")) {
            const auto before = pos_;
            block->add(parse_statement());
            if (pos_ == before) block->add(unknown_sync());
        }
        eat_punct(*block, "}");
        return block;
    }

    void parse_paren_condition(SyntaxNode& owner) {
        if (eat_punct(owner, "(")) {
            owner.add(parse_expr());
            eat_punct(owner, ")");
        }
    }

    std::unique_ptr<SyntaxNode> parse_statement() {
        if (done()) return make_node(NodeKind::Empty, last_line());
        DepthGuard guard(depth_);
        if (depth_ > kMaxDepth) return unknown_sync();
        if (cur().kind == TokenKind::Preproc) return parse_preproc();
        if (at_punct("{")) return parse_block();
        if (at_punct(";")) {
            auto node = make_node(NodeKind::Empty, cur_line());
            eat(*node);
            return node;
        }
        if (at_keyword("if")) {
            auto node = make_node(NodeKind::If, cur_line());
            eat(*node);
            parse_paren_condition(*node);
            node->add(parse_statement());
            if (at_keyword("else")) {
                auto else_node = make_node(NodeKind::Else, cur_line());
                eat(*else_node);
                else_node->add(parse_statement());
                node->add(std::move(else_node));
            }
            return node;
        }
        if (at_keyword("while")) {
            auto node = make_node(NodeKind::While, cur_line());
            eat(*node);
            parse_paren_condition(*node);
            node->add(parse_statement());
            return node;
        }
        if (at_keyword("do")) {
            auto node = make_node(NodeKind::DoWhile, cur_line());
            eat(*node);
            node->add(parse_statement());
            if (at_keyword("while")) {
                eat(*node);
                parse_paren_condition(*node);
            }
            eat_punct(*node, ";");
            return node;
        }
        if (at_keyword("for")) {
            auto node = make_node(NodeKind::For, cur_line());
            eat(*node);
            if (at_punct("(")) {
                const auto close = matching(pos_, "(", ")");
                eat(*node);  // (
                while (!done() && (close == std::string_view::npos || pos_ < close)) {
                    if (at_punct(";") || at_punct(":")) {
                        eat(*node);
                        continue;
                    }
                    const auto before = pos_;
                    if (looks_like_decl_until(close)) {
                        node->add(parse_decl_clause(close));
                    } else {
                        node->add(parse_expr());
                    }
                    if (pos_ == before) {
                        eat(*node);
                    }
                }
                eat_punct(*node, ")");
            }
            node->add(parse_statement());
            return node;
        }
        if (at_keyword("switch")) {
            auto node = make_node(NodeKind::Switch, cur_line());
            eat(*node);
            parse_paren_condition(*node);
            node->add(parse_statement());
            return node;
        }
        if (at_keyword("case")) {
            auto node = make_node(NodeKind::Case, cur_line());
            eat(*node);
            while (!done() && !at_punct(":") && !at_punct(";") && !at_punct("}")) eat(*node);
            eat_punct(*node, ":");
            return node;
        }
        if (at_keyword("default")) {
            auto node = make_node(NodeKind::Default, cur_line());
            eat(*node);
            eat_punct(*node, ":");
            return node;
        }
        if (at_keyword("return")) {
            auto node = make_node(NodeKind::Return, cur_line());
            eat(*node);
            if (!at_punct(";") && !done() && !at_punct("}")) node->add(parse_expr());
            eat_punct(*node, ";");
            return node;
        }
        if (at_keyword("break") || at_keyword("continue")) {
            auto node = make_node(at_keyword("break") ? NodeKind::Break : NodeKind::Continue,
                                  cur_line());
            eat(*node);
            eat_punct(*node, ";");
            return node;
        }
        if (at_keyword("goto")) {
            auto node = make_node(NodeKind::Goto, cur_line());
            eat(*node);
            if (!done() && cur().kind == TokenKind::Identifier) eat(*node);
            eat_punct(*node, ";");
            return node;
        }
        if (at_keyword("try")) {
            auto node = make_node(NodeKind::Try, cur_line());
            eat(*node);
            if (at_punct("{")) node->add(parse_block());
            while (at_keyword("catch")) {
                auto handler = make_node(NodeKind::Catch, cur_line());
                eat(*handler);
                if (at_punct("(")) {
                    const auto close = matching(pos_, "(", ")");
                    if (close == std::string_view::npos) {
                        eat(*handler);
                    } else {
                        while (pos_ <= close) eat(*handler);
                    }
                }
                if (at_punct("{")) handler->add(parse_block());
                node->add(std::move(handler));
            }
            return node;
        }
        if (at_keyword("typedef")) return parse_typedef();
        if ((at_keyword("struct") || at_keyword("class") || at_keyword("union") ||
             at_keyword("enum")) &&
            tag_defines_body()) {
            auto tag = parse_tag();
            while (!done() && !at_punct(";")) eat(*tag);
            eat_punct(*tag, ";");
            return tag;
        }
        // label:
        if (cur().kind == TokenKind::Identifier && peek() != nullptr &&
            peek()->kind == TokenKind::Punct && peek()->text == ":") {
            auto node = make_node(NodeKind::Label, cur_line());
            eat(*node);
            eat(*node);
            return node;
        }
        if (looks_like_decl()) return parse_decl();
        return parse_expr_statement();
    }

    // ---- declarations ------------------------------------------------------

    bool looks_like_decl() const { return looks_like_decl_until(std::string_view::npos); }

    // Heuristic: a type prefix (keywords or Identifier with ::/<>/*/&) followed
    // by a declarator name and one of `; = , [ (`.
    bool looks_like_decl_until(std::size_t limit) const {
        std::size_t i = pos_;
        const auto end = std::min(limit, toks_.size());
        bool saw_type_keyword = false;
        std::size_t idents = 0;
        while (i < end) {
            const auto& t = toks_[i];
            if (t.kind == TokenKind::Keyword && type_keywords().contains(t.text)) {
                saw_type_keyword = true;
                ++i;
                continue;
            }
            if (t.kind == TokenKind::Identifier) {
                ++idents;
                ++i;
                // consume qualified / template pieces
                while (i < end && toks_[i].kind == TokenKind::Punct &&
                       (toks_[i].text == "::" || toks_[i].text == "<" || toks_[i].text == ">")) {
                    ++i;
                    if (i < end && (toks_[i].kind == TokenKind::Identifier ||
                                    toks_[i].kind == TokenKind::Keyword ||
                                    toks_[i].kind == TokenKind::Number)) {
                        ++i;
                    }
                }
                continue;
            }
            if (t.kind == TokenKind::Punct && (t.text == "*" || t.text == "&")) {
                ++i;
                continue;
            }
            break;
        }
        if (i >= end) {
            // e.g. `int x` as a for-clause with the terminator outside range
            return (saw_type_keyword && idents >= 1) || idents >= 2;
        }
        const auto& t = toks_[i];
        const bool terminator = t.kind == TokenKind::Punct &&
                                (t.text == ";" || t.text == "=" || t.text == "," ||
                                 t.text == "[" || t.text == ")");
        if (!terminator) return false;
        return (saw_type_keyword && idents >= 1) || idents >= 2;
    }

    std::unique_ptr<SyntaxNode> parse_decl() { return parse_decl_clause(std::string_view::npos); }

    std::unique_ptr<SyntaxNode> parse_decl_clause(std::size_t limit) {
        auto node = make_node(NodeKind::Decl, cur_line());
        auto type = make_node(NodeKind::TypeName, cur_line());
        const auto end = std::min(limit, toks_.size());

        // type prefix: everything up to the last identifier before a
        // declarator terminator
        while (pos_ < end) {
            const auto& t = cur();
            const bool type_tok =
                (t.kind == TokenKind::Keyword && type_keywords().contains(t.text)) ||
                (t.kind == TokenKind::Punct &&
                 (t.text == "*" || t.text == "&" || t.text == "::" || t.text == "<" ||
                  t.text == ">"));
            if (type_tok) {
                eat(*type);
                continue;
            }
            if (t.kind == TokenKind::Identifier) {
                const auto* nxt = peek();
                const bool next_is_declarator_end =
                    nxt == nullptr || pos_ + 1 >= end ||
                    (nxt->kind == TokenKind::Punct &&
                     (nxt->text == ";" || nxt->text == "=" || nxt->text == "," ||
                      nxt->text == "[" || nxt->text == "(" || nxt->text == ")"));
                if (next_is_declarator_end) break;  // this identifier is the declarator name
                eat(*type);
                continue;
            }
            break;
        }
        if (type->own_tokens > 0) node->add(std::move(type));

        // declarators separated by commas
        while (pos_ < end && !done()) {
            auto decl = make_node(NodeKind::Declarator, cur_line());
            if (cur().kind == TokenKind::Identifier) eat(*decl);
            while (pos_ < end && !done() && at_punct("[")) {
                auto index = make_node(NodeKind::Index, cur_line());
                const auto close = matching(pos_, "[", "]");
                eat(*index);
                if (!at_punct("]") && (close == std::string_view::npos || pos_ < close)) {
                    index->add(parse_expr());
                }
                eat_punct(*index, "]");
                decl->add(std::move(index));
            }
            if (pos_ < end && at_punct("=")) {
                eat(*decl);
                decl->add(at_punct("{") ? parse_init_list() : parse_assign_expr());
            }
            node->add(std::move(decl));
            if (pos_ < end && at_punct(",")) {
                eat(*node);
                continue;
            }
            break;
        }
        if (limit == std::string_view::npos) eat_punct(*node, ";");
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_init_list() {
        DepthGuard guard(depth_);
        if (depth_ > kMaxDepth) return unknown_sync();
        auto node = make_node(NodeKind::InitList, cur_line());
        eat(*node);  // {
        while (!done() && !at_punct("}")) {
            if (at_punct(",")) {
                eat(*node);
                continue;
            }
            const auto before = pos_;
            node->add(at_punct("{") ? parse_init_list() : parse_assign_expr());
            if (pos_ == before) eat(*node);
        }
        eat_punct(*node, "}");
        return node;
    }

    // ---- expressions --------------------------------------------------------

    std::unique_ptr<SyntaxNode> parse_expr_statement() {
        auto node = make_node(NodeKind::ExprStatement, cur_line());
        node->add(parse_expr());
        eat_punct(*node, ";");
        return node;
    }

    std::unique_ptr<SyntaxNode> parse_expr() {
        auto lhs = parse_assign_expr();
        while (at_punct(",")) {
            auto node = make_node(NodeKind::BinaryOp, cur_line());
            eat(*node);
            node->add(std::move(lhs));
            node->add(parse_assign_expr());
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<SyntaxNode> parse_assign_expr() {
        DepthGuard guard(depth_);
        if (depth_ > kMaxDepth) return unknown_sync();
        auto lhs = parse_ternary();
        if (!done() && cur().kind == TokenKind::Punct && assign_ops().contains(cur().text)) {
            auto node = make_node(NodeKind::Assign, cur_line());
            eat(*node);
            node->add(std::move(lhs));
            node->add(parse_assign_expr());
            return node;
        }
        return lhs;
    }

    std::unique_ptr<SyntaxNode> parse_ternary() {
        auto cond = parse_binary(1);
        if (at_punct("?")) {
            auto node = make_node(NodeKind::Ternary, cur_line());
            eat(*node);
            node->add(std::move(cond));
            node->add(parse_assign_expr());
            eat_punct(*node, ":");
            node->add(parse_assign_expr());
            return node;
        }
        return cond;
    }

    std::unique_ptr<SyntaxNode> parse_binary(int min_prec) {
        auto lhs = parse_unary();
        while (!done() && cur().kind == TokenKind::Punct) {
            const int prec = binary_precedence(cur().text);
            if (prec < min_prec || prec == 0) break;
            auto node = make_node(NodeKind::BinaryOp, cur_line());
            eat(*node);
            node->add(std::move(lhs));
            node->add(parse_binary(prec + 1));
            lhs = std::move(node);
        }
        return lhs;
    }

    bool at_cast() const {
        // `(` type-keywords... `)` followed by an operand-ish token
        if (!at_punct("(")) return false;
        std::size_t i = pos_ + 1;
        bool saw_type = false;
        while (i < toks_.size()) {
            const auto& t = toks_[i];
            if (t.kind == TokenKind::Keyword && type_keywords().contains(t.text)) {
                saw_type = true;
                ++i;
                continue;
            }
            if (t.kind == TokenKind::Punct && (t.text == "*" || t.text == "&")) {
                ++i;
                continue;
            }
            break;
        }
        return saw_type && i < toks_.size() && toks_[i].kind == TokenKind::Punct &&
               toks_[i].text == ")";
    }

    std::unique_ptr<SyntaxNode> parse_unary() {
        DepthGuard guard(depth_);
        if (depth_ > kMaxDepth) return unknown_sync();
        if (at_keyword("sizeof")) {
            auto node = make_node(NodeKind::SizeOf, cur_line());
            eat(*node);
            if (eat_punct(*node, "(")) {
                if (!at_punct(")")) node->add(parse_expr());
                eat_punct(*node, ")");
            } else {
                node->add(parse_unary());
            }
            return node;
        }
        if (at_keyword("new") || at_keyword("delete")) {
            auto node = make_node(NodeKind::UnaryOp, cur_line());
            eat(*node);
            if (at_punct("[")) {
                eat(*node);
                eat_punct(*node, "]");
            }
            node->add(parse_unary());
            return node;
        }
        if (!done() && cur().kind == TokenKind::Punct) {
            const auto& text = cur().text;
            if (text == "!" || text == "~" || text == "-" || text == "+" || text == "*" ||
                text == "&" || text == "++" || text == "--") {
                auto node = make_node(NodeKind::UnaryOp, cur_line());
                eat(*node);
                node->add(parse_unary());
                return node;
            }
        }
        if (at_cast()) {
            auto node = make_node(NodeKind::Cast, cur_line());
            eat(*node);  // (
            auto type = make_node(NodeKind::TypeName, cur_line());
            while (!done() && !at_punct(")")) eat(*type);
            node->add(std::move(type));
            eat_punct(*node, ")");
            node->add(parse_unary());
            return node;
        }
        return parse_postfix();
    }

    std::unique_ptr<SyntaxNode> parse_postfix() {
        auto expr = parse_primary();
        while (!done() && cur().kind == TokenKind::Punct) {
            const auto& text = cur().text;
            if (text == "(") {
                auto call = make_node(NodeKind::Call, cur_line());
                call->add(std::move(expr));
                auto args = make_node(NodeKind::ArgList, cur_line());
                eat(*args);  // (
                while (!done() && !at_punct(")")) {
                    if (at_punct(",")) {
                        eat(*args);
                        continue;
                    }
                    const auto before = pos_;
                    args->add(parse_assign_expr());
                    if (pos_ == before) eat(*args);
                }
                eat_punct(*args, ")");
                call->add(std::move(args));
                expr = std::move(call);
                continue;
            }
            if (text == "[") {
                auto index = make_node(NodeKind::Index, cur_line());
                index->add(std::move(expr));
                eat(*index);  // [
                if (!at_punct("]")) index->add(parse_expr());
                eat_punct(*index, "]");
                expr = std::move(index);
                continue;
            }
            if (text == "." || text == "->" || text == "::") {
                auto member = make_node(NodeKind::Member, cur_line());
                member->add(std::move(expr));
                eat(*member);
                if (!done() &&
                    (cur().kind == TokenKind::Identifier || cur().kind == TokenKind::Keyword)) {
                    eat(*member);
                }
                expr = std::move(member);
                continue;
            }
            if (text == "++" || text == "--") {
                auto post = make_node(NodeKind::PostfixOp, cur_line());
                post->add(std::move(expr));
                eat(*post);
                expr = std::move(post);
                continue;
            }
            break;
        }
        return expr;
    }

    std::unique_ptr<SyntaxNode> parse_primary() {
        if (done()) return make_node(NodeKind::Empty, last_line());
        if (at_punct("(")) {
            auto node = make_node(NodeKind::Paren, cur_line());
            eat(*node);
            if (!at_punct(")")) node->add(parse_expr());
            eat_punct(*node, ")");
            return node;
        }
        if (at_punct("{")) return parse_init_list();
        const auto kind = cur().kind;
        if (kind == TokenKind::Identifier) {
            auto node = make_node(NodeKind::Identifier, cur_line());
            eat(*node);
            return node;
        }
        if (kind == TokenKind::Number) {
            auto node = make_node(NodeKind::Literal, cur_line());
            eat(*node);
            return node;
        }
        if (kind == TokenKind::String) {
            auto node = make_node(NodeKind::StringLiteral, cur_line());
            eat(*node);
            return node;
        }
        if (kind == TokenKind::Keyword &&
            (cur().text == "true" || cur().text == "false" || cur().text == "nullptr" ||
             cur().text == "null" || cur().text == "this")) {
            auto node = make_node(NodeKind::Literal, cur_line());
            eat(*node);
            return node;
        }
        if (kind == TokenKind::Keyword && type_keywords().contains(cur().text)) {
            // e.g. sizeof-style type mention in expression position
            auto node = make_node(NodeKind::TypeName, cur_line());
            while (!done() && cur().kind == TokenKind::Keyword &&
                   type_keywords().contains(cur().text)) {
                eat(*node);
            }
            return node;
        }
        return unknown_sync();
    }
};

}  // namespace

std::string_view to_string(NodeKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

SyntaxNode* SyntaxNode::add(std::unique_ptr<SyntaxNode> child) {
    children.push_back(std::move(child));
    return children.back().get();
}

ParseResult parse_subset(std::string_view text) {
    return Parser(lexer::tokenize(text, lexer::Flavor::Brace)).run();
}

ParseResult parse_subset(const SourceFile& file) {
    if (file.language != Language::C && file.language != Language::Cpp) {
        throw Error(ErrorCode::invalid_argument,
                    fmt::format("structural parsing covers C/C++ only, got '{}'",
                                to_string(file.language)));
    }
    std::string text;
    for (const auto& line : file.lines) {
        text += line;
        text += '\n';
    }
    return parse_subset(text);
}

namespace {

void vectorize_node(const SyntaxNode& node, int min_tokens, int stride,
                    const std::string& sample_id, const std::string& path,
                    std::array<std::uint32_t, kNodeKindCount>& out_counts,
                    std::vector<CharacteristicVector>& out) {
    std::vector<std::array<std::uint32_t, kNodeKindCount>> child_counts(node.children.size());
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        vectorize_node(*node.children[i], min_tokens, stride, sample_id, path, child_counts[i],
                       out);
    }

    out_counts.fill(0);
    out_counts[static_cast<std::size_t>(node.kind)] = 1;
    for (const auto& cc : child_counts) {
        for (std::size_t k = 0; k < kNodeKindCount; ++k) out_counts[k] += cc[k];
    }

    if (node.token_count >= min_tokens) {
        CharacteristicVector v;
        v.counts = out_counts;
        v.token_count = node.token_count;
        v.sample_id = sample_id;
        v.path = path;
        v.start_line = node.start_line;
        v.end_line = node.end_line;
        out.push_back(std::move(v));
    }

    // sliding windows over `stride` consecutive siblings (vector sums)
    if (stride >= 2 && node.children.size() >= static_cast<std::size_t>(stride)) {
        for (std::size_t i = 0; i + stride <= node.children.size(); ++i) {
            int tokens = 0;
            CharacteristicVector v;
            for (std::size_t w = 0; w < static_cast<std::size_t>(stride); ++w) {
                tokens += node.children[i + w]->token_count;
                for (std::size_t k = 0; k < kNodeKindCount; ++k) {
                    v.counts[k] += child_counts[i + w][k];
                }
            }
            if (tokens < min_tokens) continue;
            v.token_count = tokens;
            v.sample_id = sample_id;
            v.path = path;
            v.start_line = node.children[i]->start_line;
            v.end_line = node.children[i + stride - 1]->end_line;
            out.push_back(std::move(v));
        }
    }
}

}  // namespace

std::vector<CharacteristicVector> vectorize(const SyntaxNode& tree, int min_tokens, int stride) {
    if (min_tokens < 1 || stride < 1) {
        throw Error(ErrorCode::invalid_argument, "min_tokens and stride must be >= 1");
    }
    std::vector<CharacteristicVector> out;
    std::array<std::uint32_t, kNodeKindCount> scratch{};
    vectorize_node(tree, min_tokens, stride, "", "", scratch, out);
    std::sort(out.begin(), out.end(), [](const CharacteristicVector& a,
                                         const CharacteristicVector& b) {
        return std::tie(a.start_line, a.end_line, a.token_count) <
               std::tie(b.start_line, b.end_line, b.token_count);
    });
    return out;
}

namespace {

double euclidean(const CharacteristicVector& a, const CharacteristicVector& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < kNodeKindCount; ++k) {
        const double d = static_cast<double>(a.counts[k]) - static_cast<double>(b.counts[k]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

bool vector_order(const CharacteristicVector& a, const CharacteristicVector& b) {
    return std::tie(a.sample_id, a.path, a.start_line, a.end_line, a.token_count) <
           std::tie(b.sample_id, b.path, b.start_line, b.end_line, b.token_count);
}

}  // namespace

std::vector<VectorCluster> cluster(const std::vector<CharacteristicVector>& vectors,
                                   double similarity) {
    if (!(similarity > 0.0) || similarity > 1.0) {
        throw Error(ErrorCode::invalid_argument, "similarity must be in (0, 1]");
    }
    std::vector<CharacteristicVector> sorted = vectors;
    std::sort(sorted.begin(), sorted.end(), vector_order);

    std::vector<std::vector<std::size_t>> groups;
    if (similarity >= 1.0) {
        std::map<std::array<std::uint32_t, kNodeKindCount>, std::size_t> index;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            auto [it, inserted] = index.try_emplace(sorted[i].counts, groups.size());
            if (inserted) groups.emplace_back();
            groups[it->second].push_back(i);
        }
    } else {
        UnionFind uf(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            for (std::size_t j = i + 1; j < sorted.size(); ++j) {
                const double size =
                    (static_cast<double>(sorted[i].token_count) + sorted[j].token_count) / 2.0;
                const double bound = std::sqrt(2.0 * size * (1.0 - similarity));
                if (euclidean(sorted[i], sorted[j]) <= bound) uf.unite(i, j);
            }
        }
        std::map<std::size_t, std::size_t> root_to_group;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const auto root = uf.find(i);
            auto [it, inserted] = root_to_group.try_emplace(root, groups.size());
            if (inserted) groups.emplace_back();
            groups[it->second].push_back(i);
        }
    }

    std::vector<VectorCluster> clusters;
    for (const auto& group : groups) {
        if (group.size() < 2) continue;
        std::set<std::pair<std::string, std::string>> files;
        for (const auto idx : group) files.insert({sorted[idx].sample_id, sorted[idx].path});
        if (files.size() < 2) continue;
        VectorCluster cluster;
        for (const auto idx : group) cluster.members.push_back(sorted[idx]);
        cluster.representative = cluster.members.front();
        clusters.push_back(std::move(cluster));
    }
    std::sort(clusters.begin(), clusters.end(), [](const VectorCluster& a, const VectorCluster& b) {
        return vector_order(a.representative, b.representative);
    });
    return clusters;
}

std::vector<VectorCluster> detect_corpus(const corpus::Corpus& corpus, const Params& params,
                                         unsigned jobs, ParseStats* stats) {
    std::vector<const SourceFile*> eligible;
    for (const auto& file : corpus.files) {
        if (file.language == Language::C || file.language == Language::Cpp) {
            eligible.push_back(&file);
        }
    }
    std::vector<std::vector<CharacteristicVector>> per_file(eligible.size());
    std::vector<double> coverage(eligible.size(), 1.0);
    util::parallel_for(eligible.size(), jobs, [&](std::size_t i) {
        const auto parsed = parse_subset(*eligible[i]);
        coverage[i] = parsed.coverage();
        auto vectors = vectorize(*parsed.root, params.min_tokens, params.stride);
        for (auto& v : vectors) {
            v.sample_id = eligible[i]->sample_id;
            v.path = eligible[i]->rel_path.string();
        }
        per_file[i] = std::move(vectors);
    });
    if (stats != nullptr) {
        stats->files = static_cast<int>(eligible.size());
        stats->mean_coverage = 1.0;
        stats->min_coverage = 1.0;
        if (!eligible.empty()) {
            double sum = 0.0, low = 1.0;
            for (const auto c : coverage) {
                sum += c;
                low = std::min(low, c);
            }
            stats->mean_coverage = sum / static_cast<double>(coverage.size());
            stats->min_coverage = low;
        }
    }
    std::vector<CharacteristicVector> pooled;
    for (auto& chunk : per_file) {
        pooled.insert(pooled.end(), std::make_move_iterator(chunk.begin()),
                      std::make_move_iterator(chunk.end()));
    }
    return cluster(pooled, params.similarity);
}

}  // namespace srcmetry::cloneast
