// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "srcmetry/types.hpp"
#include "srcmetry/util.hpp"

namespace srcmetry::test {

/// Self-deleting temp directory for fixture trees.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("srcmetry-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    void write(const std::string& rel, const std::string& content) const {
        const auto full = path_ / rel;
        std::filesystem::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        out << content;
    }

private:
    std::filesystem::path path_;
};

inline SourceFile make_source(const std::string& sample_id, const std::string& rel_path,
                              Language language, const std::string& text) {
    SourceFile file;
    file.sample_id = sample_id;
    file.rel_path = rel_path;
    file.language = language;
    file.byte_size = text.size();
    file.content_digest = util::sha256(text);
    file.lines = util::split_lines(text);
    return file;
}

inline std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

/// A minimal single-sample manifest file next to a sample directory.
inline std::filesystem::path write_manifest(
    const TempDir& dir, const std::vector<std::tuple<std::string, int, std::string>>& samples) {
    std::string doc = "[\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [id, year, category] = samples[i];
        doc += "  {\"id\": \"" + id + "\", \"name\": \"" + id + "\", \"year\": " +
               std::to_string(year) + ", \"category\": \"" + category + "\", \"root\": \"" + id +
               "\"}";
        doc += i + 1 < samples.size() ? ",\n" : "\n";
    }
    doc += "]\n";
    dir.write("manifest.json", doc);
    return dir.path() / "manifest.json";
}

}  // namespace srcmetry::test
