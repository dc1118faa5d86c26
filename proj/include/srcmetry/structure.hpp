// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srcmetry/lexer.hpp"
#include "srcmetry/types.hpp"

namespace srcmetry::structure {

struct FunctionSpan {
    std::string file;
    std::string name;
    int start_line = 1;
    int end_line = 1;
    std::vector<lexer::Token> tokens;
};

struct ControlFlowGraph {
    std::int64_t nodes = 1;       // N
    std::int64_t edges = 0;       // E
    std::int64_t components = 1;  // P
};

/// Split a file into maximal non-overlapping function spans. Brace languages
/// segment on header lines followed by a balanced `{...}` body; Python on
/// `def` blocks by indentation. Unbalanced braces fall back to one file-level
/// span and append to `warnings` when given.
std::vector<FunctionSpan> segment_functions(const SourceFile& file,
                                            std::vector<std::string>* warnings = nullptr);

/// Decision-point cyclomatic complexity: 1 + decisions in the token stream.
int cyclomatic(const FunctionSpan& span);
int cyclomatic(const std::vector<lexer::Token>& tokens, lexer::Flavor flavor);

/// E - N + 2P of an explicit CFG.
std::int64_t cfg_cyclomatic(const ControlFlowGraph& g);

/// Halstead volume V = (N1 + N2) * log2(n1 + n2); 0 for an empty stream.
double halstead_volume(const FunctionSpan& span);
double halstead_volume(const std::vector<lexer::Token>& tokens);

/// MI = 100 * (171 - 5.2 ln(V) - 0.23 M - 16.2 ln(SLOC)) / 171.
/// v_bar and sloc_bar must be > 0.
double maintainability_index(double v_bar, double m_bar, double sloc_bar);

constexpr double kLowMaintainabilityThreshold = 20.0;

struct QualityReport {
    struct FunctionCc {
        FunctionSpan span;
        int cc = 1;
    };
    std::vector<FunctionCc> per_function_cc;
    double avg_cc = 0.0;               // mean per-function CC (M-bar)
    double avg_halstead_volume = 0.0;  // mean per-file volume (V-bar)
    double avg_sloc_per_module = 0.0;  // mean per-file SLOC (SLOC-bar)
    double mi = 0.0;                   // full formula
    double mi_upper_bound = 0.0;       // Halstead term omitted
    bool low_maintainability = false;  // mi < 20
    int modules = 0;                   // files measured
};

/// Compute per-function complexities and file-averaged MI inputs over the
/// lexable, non-assembly files of one sample. Returns nullopt when nothing is
/// measurable.
std::optional<QualityReport> analyze_sample(const std::vector<const SourceFile*>& files,
                                            unsigned jobs = 1,
                                            std::vector<std::string>* warnings = nullptr);

}  // namespace srcmetry::structure
