// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/sizing.hpp"

#include <fmt/format.h>

#include <fstream>

#include "json.hpp"

namespace srcmetry::sizing {

BackfireTable BackfireTable::defaults() {
    // PLT v8.2, SLOC per function point. Merged table rows (HTML/CSS/XML,
    // Shell/Batch) apply to each member language.
    BackfireTable t;
    t.ratios = {
        {Language::Asp, 69.0},
        {Language::Assembly, 119.0},
        {Language::Shell, 128.0},
        {Language::Batch, 128.0},
        {Language::C, 97.0},
        {Language::CSharp, 54.0},
        {Language::Cpp, 50.0},
        {Language::Html, 34.0},
        {Language::Css, 34.0},
        {Language::Xml, 34.0},
        {Language::Java, 53.0},
        {Language::JavaScript, 47.0},
        {Language::Php, 67.0},
        {Language::Pascal, 90.0},
        {Language::Python, 24.0},
        {Language::Sql, 21.0},
        {Language::VisualBasic, 42.0},
        {Language::Make, 21.0},
    };
    return t;
}

BackfireTable BackfireTable::from_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error(ErrorCode::io, fmt::format("cannot open backfire table '{}'", file.string()));
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse,
                    fmt::format("backfire table '{}': invalid JSON: {}", file.string(), e.what()));
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::parse, "backfire table: expected an object of {language: ratio}");
    }
    auto table = defaults();
    for (const auto& [key, value] : doc.items()) {
        const auto lang = language_from_name(key);
        if (!lang) {
            throw Error(ErrorCode::parse, fmt::format("backfire table: unknown language '{}'", key));
        }
        if (!value.is_number() || value.get<double>() <= 0.0) {
            throw Error(ErrorCode::parse,
                        fmt::format("backfire table: ratio for '{}' must be a positive number", key));
        }
        table.ratios[*lang] = value.get<double>();
    }
    return table;
}

double function_points(const std::map<Language, linecount::LineTally>& per_language,
                       const BackfireTable& table, std::vector<std::string>* warnings) {
    double fp = 0.0;
    for (const auto& [lang, tally] : per_language) {
        if (tally.sloc <= 0) continue;
        auto it = table.ratios.find(lang);
        if (it == table.ratios.end()) {
            const auto fallback = table.ratios.find(Language::C);
            if (fallback == table.ratios.end()) {
                throw Error(ErrorCode::domain,
                            fmt::format("no backfire ratio for language '{}' and no C fallback",
                                        to_string(lang)));
            }
            if (warnings != nullptr) {
                warnings->push_back(fmt::format("language '{}' missing from backfire table; using C ratio {}",
                                                to_string(lang), fallback->second));
            }
            fp += static_cast<double>(tally.sloc) / fallback->second;
            continue;
        }
        fp += static_cast<double>(tally.sloc) / it->second;
    }
    return fp;
}

}  // namespace srcmetry::sizing
