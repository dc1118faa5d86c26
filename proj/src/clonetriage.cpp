// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/clonetriage.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <vector>

#include "srcmetry/types.hpp"

namespace srcmetry::clonetriage {

namespace {

const std::regex& number_re() {
    // hex first so `0x41` does not decay into `0` + `x41`
    static const std::regex re(R"((0[xX][0-9a-fA-F]+[uUlL]*|\b[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?[uUlLfF]*))");
    return re;
}

const std::regex& string_re() {
    static const std::regex re(R"(("(\\.|[^"\\])*"|'(\\.|[^'\\])*'))");
    return re;
}

const std::regex& identifier_re() {
    static const std::regex re(R"([A-Za-z_][A-Za-z0-9_]+)");
    return re;
}

const std::regex& space_re() {
    static const std::regex re(R"([ \t]+)");
    return re;
}

// regex_replace, skipping matches directly preceded by '#' (placeholders).
std::string replace_unguarded(const std::string& input, const std::regex& re,
                              const std::string& replacement) {
    std::string out;
    out.reserve(input.size());
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(input.begin(), input.end(), re);
         it != std::sregex_iterator(); ++it) {
        const auto pos = static_cast<std::size_t>(it->position());
        const auto len = static_cast<std::size_t>(it->length());
        out.append(input, last, pos - last);
        if (pos > 0 && input[pos - 1] == '#') {
            out.append(input, pos, len);
        } else {
            out += replacement;
        }
        last = pos + len;
    }
    out.append(input, last, input.size() - last);
    return out;
}

}  // namespace

std::string canonicalize(const std::string& text, const CanonicalizeOptions& opts) {
    std::string out = replace_unguarded(text, number_re(), "#N");
    out = replace_unguarded(out, string_re(), "#S");
    if (opts.identifier_rule) {
        out = replace_unguarded(out, identifier_re(), "#ID");
    }
    out = std::regex_replace(out, space_re(), " ");
    return out;
}

namespace {

constexpr std::uint32_t kHashInit = 0x28021967u;
constexpr std::uint32_t kHashPrime = 0x01000193u;
constexpr int kMinBlockSize = 3;
constexpr int kSpamLength = 64;
constexpr int kWindow = 7;

constexpr char kBase64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

struct RollingHash {
    std::uint32_t h1 = 0, h2 = 0, h3 = 0;
    std::array<unsigned char, kWindow> window{};
    std::size_t n = 0;

    std::uint32_t push(unsigned char c) {
        h2 -= h1;
        h2 += kWindow * static_cast<std::uint32_t>(c);
        h1 += c;
        h1 -= window[n % kWindow];
        window[n % kWindow] = c;
        ++n;
        h3 = (h3 << 5) ^ c;
        return h1 + h2 + h3;
    }
};

std::uint32_t fnv_step(std::uint32_t h, unsigned char c) { return (h * kHashPrime) ^ c; }

struct Signatures {
    std::string sig1;
    std::string sig2;
};

Signatures signatures_at(const std::string& text, std::uint64_t block_size) {
    Signatures out;
    RollingHash roll;
    std::uint32_t h1 = kHashInit;
    std::uint32_t h2 = kHashInit;
    std::uint32_t rh = 0;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        rh = roll.push(c);
        h1 = fnv_step(h1, c);
        h2 = fnv_step(h2, c);
        if (rh % block_size == block_size - 1 &&
            out.sig1.size() < static_cast<std::size_t>(kSpamLength - 1)) {
            out.sig1 += kBase64[h1 % 64];
            h1 = kHashInit;
        }
        if (rh % (block_size * 2) == block_size * 2 - 1 &&
            out.sig2.size() < static_cast<std::size_t>(kSpamLength / 2 - 1)) {
            out.sig2 += kBase64[h2 % 64];
            h2 = kHashInit;
        }
    }
    if (rh != 0) {
        out.sig1 += kBase64[h1 % 64];
        out.sig2 += kBase64[h2 % 64];
    }
    return out;
}

// Runs of more than three identical characters carry little information and
// inflate edit-distance similarity; shrink them before scoring.
std::string squash_runs(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i >= 3 && s[i] == s[i - 1] && s[i] == s[i - 2] && s[i] == s[i - 3]) continue;
        out += s[i];
    }
    return out;
}

bool has_common_substring(const std::string& a, const std::string& b) {
    if (a.size() < static_cast<std::size_t>(kWindow) ||
        b.size() < static_cast<std::size_t>(kWindow)) {
        return false;
    }
    for (std::size_t i = 0; i + kWindow <= a.size(); ++i) {
        if (b.find(a.substr(i, kWindow)) != std::string::npos) return true;
    }
    return false;
}

// Levenshtein with substitution cost 2 (an insert plus a delete).
int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

int score_strings(const std::string& raw_a, const std::string& raw_b, std::uint64_t block_size) {
    const auto a = squash_runs(raw_a);
    const auto b = squash_runs(raw_b);
    if (!has_common_substring(a, b)) return 0;
    const auto total = static_cast<std::int64_t>(a.size() + b.size());
    if (total == 0) return 0;
    std::int64_t score = 100 - (100 * edit_distance(a, b)) / total;
    // Small signatures at small block sizes cannot support high confidence.
    const auto cap = static_cast<std::int64_t>(block_size / kMinBlockSize) *
                     static_cast<std::int64_t>(std::min(a.size(), b.size()));
    score = std::min(score, cap);
    return static_cast<int>(std::clamp<std::int64_t>(score, 0, 100));
}

struct ParsedDigest {
    std::uint64_t block_size = 0;
    std::string sig1;
    std::string sig2;
};

std::optional<ParsedDigest> parse_digest(const std::string& digest) {
    const auto first = digest.find(':');
    if (first == std::string::npos) return std::nullopt;
    const auto second = digest.find(':', first + 1);
    if (second == std::string::npos) return std::nullopt;
    ParsedDigest out;
    try {
        out.block_size = std::stoull(digest.substr(0, first));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (out.block_size == 0) return std::nullopt;
    out.sig1 = digest.substr(first + 1, second - first - 1);
    out.sig2 = digest.substr(second + 1);
    return out;
}

}  // namespace

std::string ctph(const std::string& text) {
    std::uint64_t block_size = kMinBlockSize;
    while (block_size * kSpamLength < text.size()) block_size *= 2;
    Signatures sigs;
    for (;;) {
        sigs = signatures_at(text, block_size);
        if (block_size > kMinBlockSize &&
            sigs.sig1.size() < static_cast<std::size_t>(kSpamLength / 2)) {
            block_size /= 2;
        } else {
            break;
        }
    }
    return fmt::format("{}:{}:{}", block_size, sigs.sig1, sigs.sig2);
}

CloneDigest digest(const std::string& clone_id, const std::string& canonical_text) {
    return {clone_id, canonical_text, ctph(canonical_text)};
}

int similarity(const std::string& ctph_a, const std::string& ctph_b) {
    if (ctph_a == ctph_b) return 100;
    const auto a = parse_digest(ctph_a);
    const auto b = parse_digest(ctph_b);
    if (!a || !b) {
        throw Error(ErrorCode::invalid_argument, "malformed ctph digest");
    }
    if (a->block_size == b->block_size) {
        return std::max(score_strings(a->sig1, b->sig1, a->block_size),
                        score_strings(a->sig2, b->sig2, a->block_size * 2));
    }
    if (a->block_size == b->block_size * 2) {
        return score_strings(a->sig1, b->sig2, a->block_size);
    }
    if (b->block_size == a->block_size * 2) {
        return score_strings(a->sig2, b->sig1, b->block_size);
    }
    return 0;
}

std::vector<TriageCluster> group(const std::vector<CloneDigest>& digests, int threshold) {
    const int bound = std::clamp(threshold, 0, 100);

    std::vector<std::size_t> parent(digests.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (std::size_t i = 0; i < digests.size(); ++i) {
        for (std::size_t j = i + 1; j < digests.size(); ++j) {
            if (similarity(digests[i].ctph, digests[j].ctph) >= bound) {
                parent[find(i)] = find(j);
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < digests.size(); ++i) components[find(i)].push_back(i);

    std::vector<TriageCluster> clusters;
    for (auto& [root, members] : components) {
        TriageCluster cluster;
        for (const auto idx : members) cluster.members.push_back(digests[idx].clone_id);
        std::sort(cluster.members.begin(), cluster.members.end());
        // representative: the member with the smallest clone id
        std::size_t repr = members.front();
        for (const auto idx : members) {
            if (digests[idx].clone_id < digests[repr].clone_id) repr = idx;
        }
        cluster.canonical_text = digests[repr].canonical_text;
        clusters.push_back(std::move(cluster));
    }
    std::sort(clusters.begin(), clusters.end(), [](const TriageCluster& a, const TriageCluster& b) {
        return a.members.front() < b.members.front();
    });
    return clusters;
}

}  // namespace srcmetry::clonetriage
