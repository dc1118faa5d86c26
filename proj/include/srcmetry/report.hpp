// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srcmetry/cloneast.hpp"
#include "srcmetry/clonediff.hpp"
#include "srcmetry/cocomo.hpp"
#include "srcmetry/corpus.hpp"
#include "srcmetry/linecount.hpp"
#include "srcmetry/sizing.hpp"
#include "srcmetry/structure.hpp"
#include "srcmetry/trends.hpp"

namespace srcmetry::report {

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path output_dir;
    cocomo::ProjectClass cocomo_class = cocomo::ProjectClass::Organic;
    std::set<std::string> stages = {"metrics", "clones", "triage", "trends"};
    std::string clone_engine = "both";  // diff | ast | both
    bool raw_clones = false;
    clonediff::Thresholds diff_thresholds = clonediff::Thresholds::defaults();
    cloneast::Params ast_params;
    int triage_threshold = 90;
    bool triage_identifier_rule = false;
    bool aggregate_years = false;
    bool emit_svg = false;
    unsigned jobs = 1;
    std::uint64_t seed = 0;

    static RunConfig from_json_file(const std::filesystem::path& file);
    static RunConfig from_json_text(const std::string& text,
                                    const std::filesystem::path& base_dir);
};

struct SampleReport {
    std::string id;
    std::string name;
    int year = 0;
    Category category = Category::Unknown;
    int file_count = 0;
    int language_count = 0;
    std::map<Language, linecount::LineTally> per_language;
    linecount::LineTally total;
    double function_points = 0.0;
    std::optional<cocomo::CostEstimate> cost;
    std::optional<double> comment_ratio;
    std::optional<structure::QualityReport> quality;
    std::vector<std::string> warnings;
};

/// Metrics stage over a scanned corpus: tallies, FP, COCOMO, quality.
std::vector<SampleReport> build_sample_reports(const corpus::Corpus& corpus,
                                               const sizing::BackfireTable& table,
                                               const cocomo::Coefficients& coeffs,
                                               unsigned jobs = 1);

/// Resolve the backfire/COCOMO tables, honoring the SRCMETRY_TABLE_DIR
/// override directory (backfire.json / cocomo.json) when set.
sizing::BackfireTable resolve_backfire_table();
cocomo::Coefficients resolve_cocomo_coefficients(cocomo::ProjectClass cls);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> artifacts;  // file names written, sorted
    std::vector<std::string> errors;
};

/// Execute the enabled stages and write samples.csv, report.json,
/// clones.jsonl, ast_clusters.json, clusters.json, trends.json and the plot
/// TSV files into output_dir. Any stage failure yields a nonzero exit code
/// and a FAILED marker file, with prior artifacts kept.
RunResult run(const RunConfig& config);

/// Serialized sample reports (the report.json artifact).
std::string sample_reports_to_json(const std::vector<SampleReport>& reports);
std::vector<SampleReport> sample_reports_from_json(const std::string& text);

/// Growth/linear fits over the per-sample metric series (the trends.json
/// artifact). Degenerate series serialize as {"error": ...} entries.
std::string trends_to_json(const std::vector<SampleReport>& reports, bool aggregate_years);

struct CompareColumn {
    std::optional<double> sloc, effort, duration, people, fp, cc, cr, mi;
};

struct CompareRow {
    std::string set_name;  // "a" or "b"
    std::string id;
    int year = 0;
    CompareColumn metrics;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    std::optional<trends::KsResult> cc_ks;           // function-level CC distributions
    std::optional<trends::ChiSquareResult> cc_chi;   // histogram comparison
};

/// Side-by-side metric table plus function-level CC distribution tests. The
/// SLOC/FP/COCOMO columns are recomputed from the stored tallies.
CompareResult compare(const std::vector<SampleReport>& a, const std::vector<SampleReport>& b,
                      const sizing::BackfireTable& table, const cocomo::Coefficients& coeffs);

std::string compare_to_json(const CompareResult& result);

}  // namespace srcmetry::report
