// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/clonediff.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>
#include <tuple>
#include <unordered_map>

#include "srcmetry/util.hpp"

namespace srcmetry::clonediff {

NormalizedFile normalize(const SourceFile& file, bool normalize) {
    NormalizedFile out;
    out.sample_id = file.sample_id;
    out.path = file.rel_path.string();
    out.language = file.language;
    for (std::size_t i = 0; i < file.lines.size(); ++i) {
        std::string line;
        if (normalize) {
            line.reserve(file.lines[i].size());
            for (char c : file.lines[i]) {
                if (std::isspace(static_cast<unsigned char>(c))) continue;
                line += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
        } else {
            line = file.lines[i];
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) line.clear();
        }
        if (line.empty()) continue;
        out.lines.push_back(std::move(line));
        out.origin_map.push_back(static_cast<int>(i) + 1);
    }
    return out;
}

namespace {

struct Longest {
    std::size_t start_a = 0;
    std::size_t start_b = 0;
    std::size_t length = 0;
};

// Lines interned to integers so the inner matching loop compares ints.
struct InternedPair {
    std::vector<int> a;
    std::vector<int> b;
    bool any_common = false;

    InternedPair(const std::vector<std::string>& lines_a,
                 const std::vector<std::string>& lines_b) {
        std::unordered_map<std::string_view, int> ids;
        ids.reserve(lines_a.size() + lines_b.size());
        a.reserve(lines_a.size());
        b.reserve(lines_b.size());
        for (const auto& line : lines_a) {
            a.push_back(ids.try_emplace(line, static_cast<int>(ids.size())).first->second);
        }
        for (const auto& line : lines_b) {
            const auto it = ids.find(line);
            if (it == ids.end()) {
                b.push_back(-1 - static_cast<int>(b.size()));  // unique, matches nothing in a
            } else {
                b.push_back(it->second);
                any_common = true;
            }
        }
    }
};

// Longest common contiguous run of a[alo..ahi) x b[blo..bhi). Ties favor the
// smallest start_a, then the smallest start_b.
Longest longest_match(const std::vector<int>& a, const std::vector<int>& b, std::size_t alo,
                      std::size_t ahi, std::size_t blo, std::size_t bhi) {
    Longest best;
    // j2len[j] = length of the common run ending at (i, j).
    std::vector<std::size_t> j2len(bhi - blo, 0), next(bhi - blo, 0);
    for (std::size_t i = alo; i < ahi; ++i) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t j = blo; j < bhi; ++j) {
            if (a[i] != b[j]) continue;
            const std::size_t k = (j > blo ? j2len[j - blo - 1] : 0) + 1;
            next[j - blo] = k;
            if (k > best.length) {
                best = {i - k + 1, j - k + 1, k};
            }
        }
        std::swap(j2len, next);
    }
    return best;
}

// Iterative decomposition; recursion depth would otherwise grow with the
// number of blocks. Blocks are monotone in both sequences, so a final sort
// restores in-order emission.
void decompose(const std::vector<int>& a, const std::vector<int>& b, std::vector<Block>& out) {
    std::vector<std::array<std::size_t, 4>> pending{{0, a.size(), 0, b.size()}};
    while (!pending.empty()) {
        const auto [alo, ahi, blo, bhi] = [&] {
            const auto range = pending.back();
            pending.pop_back();
            return std::tuple(range[0], range[1], range[2], range[3]);
        }();
        if (alo >= ahi || blo >= bhi) continue;
        const auto best = longest_match(a, b, alo, ahi, blo, bhi);
        if (best.length == 0) continue;
        out.push_back({best.start_a, best.start_b, best.length});
        pending.push_back({alo, best.start_a, blo, best.start_b});
        pending.push_back({best.start_a + best.length, ahi, best.start_b + best.length, bhi});
    }
    std::sort(out.begin(), out.end(),
              [](const Block& x, const Block& y) { return x.start_a < y.start_a; });
}

}  // namespace

std::vector<Block> matching_blocks(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
    std::vector<Block> out;
    const InternedPair interned(a, b);
    if (!interned.any_common) return out;
    decompose(interned.a, interned.b, out);
    return out;
}

namespace {

std::vector<CloneMatch> detect_oriented(const NormalizedFile& a, const NormalizedFile& b,
                                        int min_sloc) {
    std::vector<CloneMatch> matches;
    for (const auto& block : matching_blocks(a.lines, b.lines)) {
        if (block.length < static_cast<std::size_t>(min_sloc)) continue;
        CloneMatch m;
        m.sample_a = a.sample_id;
        m.path_a = a.path;
        m.sample_b = b.sample_id;
        m.path_b = b.path;
        m.start_a = a.origin_map[block.start_a];
        m.end_a = a.origin_map[block.start_a + block.length - 1];
        m.start_b = b.origin_map[block.start_b];
        m.end_b = b.origin_map[block.start_b + block.length - 1];
        m.length_sloc = static_cast<int>(block.length);
        m.language = a.language;
        for (std::size_t k = 0; k < block.length; ++k) {
            if (k > 0) m.normalized_text += '\n';
            m.normalized_text += a.lines[block.start_a + k];
        }
        matches.push_back(std::move(m));
    }
    return matches;
}

CloneMatch mirrored(CloneMatch m) {
    std::swap(m.sample_a, m.sample_b);
    std::swap(m.path_a, m.path_b);
    std::swap(m.start_a, m.start_b);
    std::swap(m.end_a, m.end_b);
    return m;
}

// Canonical orientation keeps detect_pair(a, b) the exact mirror of
// detect_pair(b, a) without relying on tie-break symmetry.
bool canonical_order(const NormalizedFile& a, const NormalizedFile& b) {
    if (auto cmp = std::tie(a.sample_id, a.path) <=> std::tie(b.sample_id, b.path); cmp != 0) {
        return cmp < 0;
    }
    return a.lines <= b.lines;
}

}  // namespace

std::vector<CloneMatch> detect_pair(const NormalizedFile& a, const NormalizedFile& b,
                                    int min_sloc) {
    if (min_sloc < 1) {
        throw Error(ErrorCode::invalid_argument, "min_sloc must be >= 1");
    }
    if (canonical_order(a, b)) return detect_oriented(a, b, min_sloc);
    auto matches = detect_oriented(b, a, min_sloc);
    for (auto& m : matches) m = mirrored(std::move(m));
    return matches;
}

Thresholds Thresholds::defaults() {
    Thresholds t;
    t.per_language = {{Language::Assembly, 10}, {Language::C, 5}, {Language::Cpp, 5}};
    t.fallback = 5;
    return t;
}

int Thresholds::for_language(Language lang) const {
    const auto it = per_language.find(lang);
    return it != per_language.end() ? it->second : fallback;
}

std::vector<CloneMatch> detect_corpus(const corpus::Corpus& corpus, const Thresholds& thresholds,
                                      bool normalize_lines, unsigned jobs) {
    std::vector<NormalizedFile> normed;
    normed.reserve(corpus.files.size());
    for (const auto& file : corpus.files) {
        if (file.language == Language::Unknown) continue;
        normed.push_back(normalize(file, normalize_lines));
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < normed.size(); ++i) {
        for (std::size_t j = i + 1; j < normed.size(); ++j) {
            if (normed[i].sample_id == normed[j].sample_id) continue;
            if (normed[i].language != normed[j].language) continue;
            pairs.emplace_back(i, j);
        }
    }

    std::vector<std::vector<CloneMatch>> per_pair(pairs.size());
    util::parallel_for(pairs.size(), jobs, [&](std::size_t p) {
        const auto& [i, j] = pairs[p];
        per_pair[p] =
            detect_pair(normed[i], normed[j], thresholds.for_language(normed[i].language));
    });

    std::vector<CloneMatch> all;
    for (auto& chunk : per_pair) {
        all.insert(all.end(), std::make_move_iterator(chunk.begin()),
                   std::make_move_iterator(chunk.end()));
    }
    std::sort(all.begin(), all.end(), [](const CloneMatch& x, const CloneMatch& y) {
        return std::tie(x.sample_a, x.sample_b, x.path_a, x.path_b, x.start_a, x.start_b) <
               std::tie(y.sample_a, y.sample_b, y.path_a, y.path_b, y.start_a, y.start_b);
    });
    return all;
}

}  // namespace srcmetry::clonediff
