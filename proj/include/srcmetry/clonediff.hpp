// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "srcmetry/corpus.hpp"
#include "srcmetry/types.hpp"

namespace srcmetry::clonediff {

struct NormalizedFile {
    std::string sample_id;
    std::string path;
    Language language = Language::Unknown;
    std::vector<std::string> lines;     // normalized, empties dropped
    std::vector<int> origin_map;        // normalized index -> original 1-based line
};

/// Strip all whitespace, lowercase, drop lines that become empty. With
/// `normalize = false` only blank-only lines are dropped (raw mode).
NormalizedFile normalize(const SourceFile& file, bool normalize = true);

struct Block {
    std::size_t start_a = 0;
    std::size_t start_b = 0;
    std::size_t length = 0;
};

/// Recursive longest-matching-block decomposition over two line sequences
/// (each line is one symbol). Blocks are ordered and non-overlapping in both
/// sequences. Ties pick the smallest start_a, then smallest start_b.
std::vector<Block> matching_blocks(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b);

struct CloneMatch {
    std::string sample_a, path_a;
    std::string sample_b, path_b;
    int start_a = 0, end_a = 0;  // original 1-based inclusive line range
    int start_b = 0, end_b = 0;
    int length_sloc = 0;
    Language language = Language::Unknown;
    std::string normalized_text;  // matched lines joined with '\n'
};

/// Matching blocks of length >= min_sloc, mapped back to original line
/// ranges. Mirroring invariant: detect_pair(a, b) equals detect_pair(b, a)
/// with the two sides swapped.
std::vector<CloneMatch> detect_pair(const NormalizedFile& a, const NormalizedFile& b,
                                    int min_sloc);

struct Thresholds {
    std::map<Language, int> per_language;  // min clone length in SLOC
    int fallback = 5;

    static Thresholds defaults();  // Assembly 10, everything else 5
    int for_language(Language lang) const;
};

/// Cross-sample clone detection: every pair of files of equal language, one
/// file from each of two distinct samples. Results are sorted by
/// (sample_a, sample_b, path_a, path_b, start_a).
std::vector<CloneMatch> detect_corpus(const corpus::Corpus& corpus, const Thresholds& thresholds,
                                      bool normalize = true, unsigned jobs = 1);

}  // namespace srcmetry::clonediff
