// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srcmetry/types.hpp"

namespace srcmetry::corpus {

struct SkipRecord {
    std::string sample_id;
    std::filesystem::path rel_path;
    std::string reason;  // "binary", "unreadable"
};

struct ScanResult {
    std::vector<SourceFile> files;  // sorted by rel_path
    std::vector<SkipRecord> skipped;
};

/// Immutable corpus snapshot: manifests plus the scanned files of every sample.
struct Corpus {
    std::vector<SampleManifest> samples;
    std::vector<SourceFile> files;  // sorted by (sample_id, rel_path)
    std::vector<SkipRecord> skipped;

    std::vector<const SourceFile*> files_of(const std::string& sample_id) const;
};

/// Map a file to a language from its extension/name alone. `.h` is ambiguous
/// and resolved by `sibling_cpp`: true if the surrounding sample contains any
/// C++-mapped file.
Language language_from_path(const std::filesystem::path& rel_path, bool sibling_cpp);

/// Language from a shebang first line (`#!...`), or Unknown.
Language language_from_shebang(std::string_view first_line);

/// Scan a directory tree into SourceFiles. Hidden directories are skipped,
/// symlinks are not followed, binary files become skip records. The returned
/// file list is sorted by rel_path.
ScanResult scan(const std::filesystem::path& root, const SampleManifest& manifest,
                unsigned jobs = 1);

/// Parse and validate a manifest file (JSON array of sample objects). Relative
/// roots are resolved against the manifest's directory. Schema violations and
/// duplicate ids are fatal.
std::vector<SampleManifest> load_manifest(const std::filesystem::path& file);

/// Load the manifest and scan every sample.
Corpus load(const std::filesystem::path& manifest_file, unsigned jobs = 1);

}  // namespace srcmetry::corpus
