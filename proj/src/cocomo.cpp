// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/cocomo.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "srcmetry/types.hpp"
#include "srcmetry/util.hpp"

namespace srcmetry::cocomo {

std::string_view to_string(ProjectClass cls) {
    switch (cls) {
        case ProjectClass::Organic: return "organic";
        case ProjectClass::SemiDetached: return "semidetached";
        case ProjectClass::Embedded: return "embedded";
    }
    return "organic";
}

std::optional<ProjectClass> project_class_from_name(std::string_view name) {
    const auto lower = util::to_lower(name);
    if (lower == "organic") return ProjectClass::Organic;
    if (lower == "semidetached" || lower == "semi-detached") return ProjectClass::SemiDetached;
    if (lower == "embedded") return ProjectClass::Embedded;
    return std::nullopt;
}

Coefficients Coefficients::defaults(ProjectClass cls) {
    switch (cls) {
        case ProjectClass::Organic: return {2.4, 1.05, 2.5, 0.38, cls};
        case ProjectClass::SemiDetached: return {3.0, 1.12, 2.5, 0.35, cls};
        case ProjectClass::Embedded: return {3.6, 1.20, 2.5, 0.32, cls};
    }
    return {2.4, 1.05, 2.5, 0.38, ProjectClass::Organic};
}

Coefficients Coefficients::from_json_file(const std::filesystem::path& file, ProjectClass cls) {
    std::ifstream in(file);
    if (!in) {
        throw Error(ErrorCode::io, fmt::format("cannot open coefficient table '{}'", file.string()));
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse,
                    fmt::format("coefficient table '{}': invalid JSON: {}", file.string(), e.what()));
    }
    const auto key = std::string(to_string(cls));
    if (!doc.is_object() || !doc.contains(key)) {
        throw Error(ErrorCode::parse,
                    fmt::format("coefficient table: missing entry for class '{}'", key));
    }
    const auto& row = doc[key];
    auto coeffs = defaults(cls);
    try {
        coeffs.a_b = row.at("a").get<double>();
        coeffs.b_b = row.at("b").get<double>();
        coeffs.c_b = row.at("c").get<double>();
        coeffs.d_b = row.at("d").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse,
                    fmt::format("coefficient table: entry '{}' must hold numbers a, b, c, d: {}",
                                key, e.what()));
    }
    return coeffs;
}

CostEstimate estimate(double kloc, const Coefficients& coeffs) {
    if (!(kloc > 0.0)) {
        throw Error(ErrorCode::domain, fmt::format("kloc must be > 0, got {}", kloc));
    }
    CostEstimate est;
    est.kloc = kloc;
    est.effort_man_months = coeffs.a_b * std::pow(kloc, coeffs.b_b);
    est.duration_months = coeffs.c_b * std::pow(est.effort_man_months, coeffs.d_b);
    est.people = est.effort_man_months / est.duration_months;
    return est;
}

}  // namespace srcmetry::cocomo
