// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace srcmetry::clonetriage {

struct CanonicalizeOptions {
    bool identifier_rule = false;  // identifiers longer than one char -> #ID
};

/// Ordered regex canonicalization: hex/decimal literals -> #N, quoted strings
/// -> #S, (optionally) identifiers longer than one char -> #ID, repeated
/// whitespace collapsed. Idempotent.
std::string canonicalize(const std::string& text, const CanonicalizeOptions& opts = {});

struct CloneDigest {
    std::string clone_id;
    std::string canonical_text;
    std::string ctph;  // "blocksize:sig:sig2"
};

/// Context-triggered piecewise hash of `text` (after canonicalization the
/// caller already applied). Deterministic; equal inputs yield equal digests.
std::string ctph(const std::string& text);

CloneDigest digest(const std::string& clone_id, const std::string& canonical_text);

/// Similarity score in [0, 100] between two ctph digests. Symmetric;
/// identical digests score 100; unrelated inputs score near 0.
int similarity(const std::string& ctph_a, const std::string& ctph_b);

struct TriageCluster {
    std::vector<std::string> members;  // clone ids, sorted
    std::string canonical_text;        // representative (first member's)
    std::optional<std::string> label;  // analyst-assigned, round-tripped
};

/// Single-linkage grouping on pairwise ctph similarity >= threshold
/// (clamped to [0, 100]). Every digest lands in exactly one cluster;
/// singletons are kept. Result is input-order independent.
std::vector<TriageCluster> group(const std::vector<CloneDigest>& digests, int threshold);

}  // namespace srcmetry::clonetriage
