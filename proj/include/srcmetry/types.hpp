// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srcmetry {

/// Error category carried across the library and mapped onto C-API status codes.
enum class ErrorCode {
    io = 1,
    parse = 2,
    invalid_argument = 3,
    domain = 4,
    internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class Language {
    Assembly,
    C,
    Cpp,
    CSharp,
    Java,
    JavaScript,
    Php,
    Pascal,
    Python,
    Sql,
    VisualBasic,
    Shell,
    Batch,
    Html,
    Css,
    Xml,
    Asp,
    Make,
    Other,
    Unknown,
};

std::string_view to_string(Language lang);
std::optional<Language> language_from_name(std::string_view name);

/// The eight coarse sample categories plus UNKNOWN.
enum class Category { V, W, M, T, B, R, E, K, Unknown };

std::string_view to_string(Category cat);
std::optional<Category> category_from_name(std::string_view name);

struct SampleManifest {
    std::string id;
    std::string name;
    int year = 0;
    Category category = Category::Unknown;
    std::filesystem::path root;
    std::string notes;
};

constexpr int kMinYear = 1970;
constexpr int kMaxYear = 2100;

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& digest);

struct SourceFile {
    std::string sample_id;
    std::filesystem::path rel_path;
    Language language = Language::Unknown;
    std::uint64_t byte_size = 0;
    Digest content_digest{};
    std::vector<std::string> lines;  // decoded text, one entry per physical line
};

}  // namespace srcmetry
