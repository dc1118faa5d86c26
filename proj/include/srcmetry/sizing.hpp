// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "srcmetry/linecount.hpp"
#include "srcmetry/types.hpp"

namespace srcmetry::sizing {

/// SLOC-per-function-point ratios used for backfiring.
struct BackfireTable {
    std::map<Language, double> ratios;

    /// PLT v8.2 defaults.
    static BackfireTable defaults();

    /// Load `{language-name: ratio}` overrides on top of the defaults.
    static BackfireTable from_json_file(const std::filesystem::path& file);
};

/// Sum over languages of sloc / ratio. Languages missing from the table fall
/// back to the C ratio and report a warning through `warnings` when given.
double function_points(const std::map<Language, linecount::LineTally>& per_language,
                       const BackfireTable& table,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace srcmetry::sizing
