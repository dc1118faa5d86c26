// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

namespace srcmetry::cocomo {

enum class ProjectClass { Organic, SemiDetached, Embedded };

std::string_view to_string(ProjectClass cls);
std::optional<ProjectClass> project_class_from_name(std::string_view name);

struct Coefficients {
    double a_b;
    double b_b;
    double c_b;
    double d_b;
    ProjectClass project_class;

    static Coefficients defaults(ProjectClass cls);
    static Coefficients from_json_file(const std::filesystem::path& file, ProjectClass cls);
};

struct CostEstimate {
    double effort_man_months = 0.0;  // E
    double duration_months = 0.0;    // D
    double people = 0.0;             // P
    double kloc = 0.0;
};

/// E = a * kloc^b, D = c * E^d, P = E / D. kloc must be > 0.
CostEstimate estimate(double kloc, const Coefficients& coeffs);

}  // namespace srcmetry::cocomo
