// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/types.hpp"

#include <fmt/format.h>

namespace srcmetry {

std::string_view to_string(Language lang) {
    switch (lang) {
        case Language::Assembly: return "Assembly";
        case Language::C: return "C";
        case Language::Cpp: return "C++";
        case Language::CSharp: return "C#";
        case Language::Java: return "Java";
        case Language::JavaScript: return "JavaScript";
        case Language::Php: return "PHP";
        case Language::Pascal: return "Pascal";
        case Language::Python: return "Python";
        case Language::Sql: return "SQL";
        case Language::VisualBasic: return "VisualBasic";
        case Language::Shell: return "Shell";
        case Language::Batch: return "Batch";
        case Language::Html: return "HTML";
        case Language::Css: return "CSS";
        case Language::Xml: return "XML";
        case Language::Asp: return "ASP";
        case Language::Make: return "Make";
        case Language::Other: return "Other";
        case Language::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::optional<Language> language_from_name(std::string_view name) {
    static const std::pair<std::string_view, Language> table[] = {
        {"Assembly", Language::Assembly}, {"C", Language::C},
        {"C++", Language::Cpp},           {"C#", Language::CSharp},
        {"Java", Language::Java},         {"JavaScript", Language::JavaScript},
        {"PHP", Language::Php},           {"Pascal", Language::Pascal},
        {"Python", Language::Python},     {"SQL", Language::Sql},
        {"VisualBasic", Language::VisualBasic}, {"Shell", Language::Shell},
        {"Batch", Language::Batch},       {"HTML", Language::Html},
        {"CSS", Language::Css},           {"XML", Language::Xml},
        {"ASP", Language::Asp},           {"Make", Language::Make},
        {"Other", Language::Other},       {"UNKNOWN", Language::Unknown},
    };
    for (const auto& [key, value] : table) {
        if (key == name) return value;
    }
    return std::nullopt;
}

std::string_view to_string(Category cat) {
    switch (cat) {
        case Category::V: return "V";
        case Category::W: return "W";
        case Category::M: return "M";
        case Category::T: return "T";
        case Category::B: return "B";
        case Category::R: return "R";
        case Category::E: return "E";
        case Category::K: return "K";
        case Category::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::optional<Category> category_from_name(std::string_view name) {
    if (name.size() == 1) {
        switch (name[0]) {
            case 'V': return Category::V;
            case 'W': return Category::W;
            case 'M': return Category::M;
            case 'T': return Category::T;
            case 'B': return Category::B;
            case 'R': return Category::R;
            case 'E': return Category::E;
            case 'K': return Category::K;
            default: return std::nullopt;
        }
    }
    if (name == "UNKNOWN") return Category::Unknown;
    return std::nullopt;
}

std::string to_hex(const Digest& digest) {
    std::string out;
    out.reserve(64);
    for (auto byte : digest) out += fmt::format("{:02x}", byte);
    return out;
}

}  // namespace srcmetry
