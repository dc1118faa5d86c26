// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "srcmetry/corpus.hpp"
#include "srcmetry/types.hpp"

namespace srcmetry::cloneast {

/// Node kinds of the C-family subset grammar. Order is the characteristic
/// vector index and must stay stable.
enum class NodeKind : std::uint8_t {
    TranslationUnit,
    FunctionDef,
    ParamList,
    Param,
    Block,
    If,
    Else,
    For,
    While,
    DoWhile,
    Switch,
    Case,
    Default,
    Return,
    Break,
    Continue,
    Goto,
    Label,
    ExprStatement,
    Decl,
    Declarator,
    InitList,
    TypeName,
    Assign,
    Ternary,
    BinaryOp,
    UnaryOp,
    PostfixOp,
    Call,
    ArgList,
    Index,
    Member,
    Cast,
    Paren,
    Identifier,
    Literal,
    StringLiteral,
    SizeOf,
    Preproc,
    Struct,
    Enum,
    Typedef,
    Try,
    Catch,
    Namespace,
    Using,
    Empty,
    Unknown,
    Count_,  // sentinel
};

constexpr std::size_t kNodeKindCount = static_cast<std::size_t>(NodeKind::Count_);

std::string_view to_string(NodeKind kind);

struct SyntaxNode {
    NodeKind kind = NodeKind::Unknown;
    std::vector<std::unique_ptr<SyntaxNode>> children;
    int own_tokens = 0;    // tokens owned by this node directly
    int token_count = 0;   // own + children, filled by finalize()
    int start_line = 1;
    int end_line = 1;

    SyntaxNode* add(std::unique_ptr<SyntaxNode> child);
};

struct ParseResult {
    std::unique_ptr<SyntaxNode> root;  // TranslationUnit
    int total_tokens = 0;
    int unknown_tokens = 0;            // tokens swallowed by Unknown nodes

    double coverage() const {
        return total_tokens == 0 ? 1.0
                                 : 1.0 - static_cast<double>(unknown_tokens) / total_tokens;
    }
};

/// Tolerant recursive-descent parse of C/C++ source. Never throws on
/// malformed input; unparseable regions become Unknown nodes.
ParseResult parse_subset(const SourceFile& file);
ParseResult parse_subset(std::string_view text);

struct CharacteristicVector {
    std::array<std::uint32_t, kNodeKindCount> counts{};
    int token_count = 0;
    std::string sample_id;
    std::string path;
    int start_line = 1;
    int end_line = 1;

    bool same_counts(const CharacteristicVector& other) const { return counts == other.counts; }
};

/// One vector per subtree with token_count >= min_tokens, plus merged vectors
/// over sliding windows of `stride` consecutive sibling subtrees.
std::vector<CharacteristicVector> vectorize(const SyntaxNode& tree, int min_tokens, int stride);

struct VectorCluster {
    std::vector<CharacteristicVector> members;  // >= 2, from >= 2 distinct files
    CharacteristicVector representative;
};

/// Group vectors into clone clusters. similarity == 1.0 groups by exact
/// vector equality; below 1.0 a size-scaled Euclidean bound
/// d = sqrt(2 * size * (1 - s)) is used with single-linkage grouping.
std::vector<VectorCluster> cluster(const std::vector<CharacteristicVector>& vectors,
                                   double similarity);

struct Params {
    int min_tokens = 100;
    int stride = 2;
    double similarity = 1.0;
};

struct ParseStats {
    int files = 0;
    double mean_coverage = 1.0;  // fraction of tokens outside Unknown nodes
    double min_coverage = 1.0;
};

/// Parse, vectorize, and cluster the C/C++ files of a corpus. Only clusters
/// spanning at least two distinct files are reported. `stats`, when given,
/// receives the parse-coverage ratios.
std::vector<VectorCluster> detect_corpus(const corpus::Corpus& corpus, const Params& params,
                                         unsigned jobs = 1, ParseStats* stats = nullptr);

}  // namespace srcmetry::cloneast
