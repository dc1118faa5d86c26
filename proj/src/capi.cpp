// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry.h"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "srcmetry/clonetriage.hpp"
#include "srcmetry/report.hpp"
#include "srcmetry/trends.hpp"

using nlohmann::json;
using namespace srcmetry;

namespace {

thread_local std::string g_last_error;

sm_status status_of(const Error& e) {
    switch (e.code()) {
        case ErrorCode::io: return SM_ERR_IO;
        case ErrorCode::parse: return SM_ERR_PARSE;
        case ErrorCode::invalid_argument: return SM_ERR_INVALID_ARGUMENT;
        case ErrorCode::domain: return SM_ERR_DOMAIN;
        case ErrorCode::internal: return SM_ERR_INTERNAL;
    }
    return SM_ERR_INTERNAL;
}

template <typename Fn>
sm_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SM_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sm_status set_out(char** out, const std::string& s) {
    if (out == nullptr) return SM_OK;
    *out = dup_string(s);
    if (*out == nullptr) {
        g_last_error = "out of memory";
        return SM_ERR_INTERNAL;
    }
    return SM_OK;
}

json parse_options(const char* options_json) {
    if (options_json == nullptr || *options_json == '\0') return json::object();
    try {
        auto doc = json::parse(options_json);
        if (!doc.is_object()) throw Error(ErrorCode::parse, "options: expected a JSON object");
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, fmt::format("options: invalid JSON: {}", e.what()));
    }
}

std::vector<trends::TimeSeriesPoint> points_from_json(const char* series_json) {
    if (series_json == nullptr) {
        throw Error(ErrorCode::invalid_argument, "series_json must be non-NULL");
    }
    json doc;
    try {
        doc = json::parse(series_json);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, fmt::format("series: invalid JSON: {}", e.what()));
    }
    if (!doc.contains("points") || !doc["points"].is_array()) {
        throw Error(ErrorCode::parse, "series: expected {\"points\": [{year, value}...]}");
    }
    std::vector<trends::TimeSeriesPoint> points;
    for (const auto& p : doc["points"]) {
        points.push_back({p.at("year").get<int>(), p.at("value").get<double>()});
    }
    return points;
}

}  // namespace

struct sm_corpus {
    corpus::Corpus data;
};

extern "C" {

const char* sm_version(void) { return "1.0.0"; }

const char* sm_last_error(void) { return g_last_error.c_str(); }

void sm_string_free(char* s) { std::free(s); }

sm_status sm_corpus_load(const char* manifest_path, int jobs, sm_corpus** out) {
    return guarded([&]() -> sm_status {
        if (manifest_path == nullptr || out == nullptr) {
            throw Error(ErrorCode::invalid_argument, "manifest_path and out must be non-NULL");
        }
        auto corpus = std::make_unique<sm_corpus>();
        corpus->data = corpus::load(manifest_path, jobs > 0 ? static_cast<unsigned>(jobs) : 1);
        *out = corpus.release();
        return SM_OK;
    });
}

void sm_corpus_free(sm_corpus* corpus) { delete corpus; }

int sm_corpus_sample_count(const sm_corpus* corpus) {
    return corpus == nullptr ? 0 : static_cast<int>(corpus->data.samples.size());
}

int sm_corpus_file_count(const sm_corpus* corpus) {
    return corpus == nullptr ? 0 : static_cast<int>(corpus->data.files.size());
}

sm_status sm_corpus_summary_json(const sm_corpus* corpus, char** json_out) {
    return guarded([&]() -> sm_status {
        if (corpus == nullptr) throw Error(ErrorCode::invalid_argument, "corpus must be non-NULL");
        json samples = json::array();
        for (const auto& sample : corpus->data.samples) {
            json languages = json::object();
            int files = 0;
            for (const auto& file : corpus->data.files) {
                if (file.sample_id != sample.id) continue;
                ++files;
                const auto key = std::string(to_string(file.language));
                languages[key] = languages.value(key, 0) + 1;
            }
            int skipped = 0;
            for (const auto& skip : corpus->data.skipped) {
                if (skip.sample_id == sample.id) ++skipped;
            }
            samples.push_back({{"id", sample.id},
                               {"name", sample.name},
                               {"year", sample.year},
                               {"category", std::string(to_string(sample.category))},
                               {"files", files},
                               {"languages", languages},
                               {"skipped", skipped}});
        }
        const json doc = {{"samples", samples},
                          {"total_files", corpus->data.files.size()},
                          {"total_skipped", corpus->data.skipped.size()}};
        return set_out(json_out, doc.dump(2) + "\n");
    });
}

sm_status sm_corpus_metrics_json(const sm_corpus* corpus, const char* options_json,
                                 char** json_out) {
    return guarded([&]() -> sm_status {
        if (corpus == nullptr) throw Error(ErrorCode::invalid_argument, "corpus must be non-NULL");
        const auto options = parse_options(options_json);
        auto cls = cocomo::ProjectClass::Organic;
        if (options.contains("cocomo_class")) {
            const auto parsed =
                cocomo::project_class_from_name(options["cocomo_class"].get<std::string>());
            if (!parsed) throw Error(ErrorCode::invalid_argument, "unknown cocomo_class");
            cls = *parsed;
        }
        const auto jobs = options.value("jobs", 1u);
        const auto reports =
            report::build_sample_reports(corpus->data, report::resolve_backfire_table(),
                                         report::resolve_cocomo_coefficients(cls), jobs);
        return set_out(json_out, report::sample_reports_to_json(reports));
    });
}

sm_status sm_cocomo_estimate(double kloc, const char* project_class, double* effort_out,
                             double* duration_out, double* people_out) {
    return guarded([&]() -> sm_status {
        auto cls = cocomo::ProjectClass::Organic;
        if (project_class != nullptr && *project_class != '\0') {
            const auto parsed = cocomo::project_class_from_name(project_class);
            if (!parsed) {
                throw Error(ErrorCode::invalid_argument,
                            fmt::format("unknown project class '{}'", project_class));
            }
            cls = *parsed;
        }
        const auto est = cocomo::estimate(kloc, report::resolve_cocomo_coefficients(cls));
        if (effort_out != nullptr) *effort_out = est.effort_man_months;
        if (duration_out != nullptr) *duration_out = est.duration_months;
        if (people_out != nullptr) *people_out = est.people;
        return SM_OK;
    });
}

sm_status sm_corpus_clones(const sm_corpus* corpus, const char* options_json, char** out) {
    return guarded([&]() -> sm_status {
        if (corpus == nullptr) throw Error(ErrorCode::invalid_argument, "corpus must be non-NULL");
        const auto options = parse_options(options_json);
        const auto engine = options.value("engine", std::string("diff"));
        const auto jobs = options.value("jobs", 1u);
        if (engine == "diff") {
            auto thresholds = clonediff::Thresholds::defaults();
            if (options.contains("thresholds")) {
                for (const auto& [key, value] : options["thresholds"].items()) {
                    const auto lang = language_from_name(key);
                    if (!lang) {
                        throw Error(ErrorCode::invalid_argument,
                                    fmt::format("thresholds: unknown language '{}'", key));
                    }
                    thresholds.per_language[*lang] = value.get<int>();
                }
            }
            const bool raw = options.value("raw", false);
            const auto matches =
                clonediff::detect_corpus(corpus->data, thresholds, !raw, jobs);
            std::string lines;
            for (std::size_t i = 0; i < matches.size(); ++i) {
                const auto& m = matches[i];
                const json doc = {{"id", fmt::format("clone-{:06}", i + 1)},
                                  {"language", std::string(to_string(m.language))},
                                  {"sample_a", m.sample_a},
                                  {"path_a", m.path_a},
                                  {"start_a", m.start_a},
                                  {"end_a", m.end_a},
                                  {"sample_b", m.sample_b},
                                  {"path_b", m.path_b},
                                  {"start_b", m.start_b},
                                  {"end_b", m.end_b},
                                  {"length_sloc", m.length_sloc},
                                  {"normalized_text", m.normalized_text}};
                lines += doc.dump();
                lines += '\n';
            }
            return set_out(out, lines);
        }
        if (engine == "ast") {
            cloneast::Params params;
            params.min_tokens = options.value("min_tokens", params.min_tokens);
            params.stride = options.value("stride", params.stride);
            params.similarity = options.value("similarity", params.similarity);
            cloneast::ParseStats stats;
            const auto clusters = cloneast::detect_corpus(corpus->data, params, jobs, &stats);
            json cluster_array = json::array();
            for (const auto& cluster : clusters) {
                json members = json::array();
                for (const auto& member : cluster.members) {
                    members.push_back({{"sample", member.sample_id},
                                       {"path", member.path},
                                       {"start_line", member.start_line},
                                       {"end_line", member.end_line},
                                       {"token_count", member.token_count}});
                }
                cluster_array.push_back({{"size", cluster.members.size()}, {"members", members}});
            }
            const json doc = {{"params",
                               {{"min_tokens", params.min_tokens},
                                {"stride", params.stride},
                                {"similarity", params.similarity}}},
                              {"parse_coverage",
                               {{"files", stats.files},
                                {"mean", stats.mean_coverage},
                                {"min", stats.min_coverage}}},
                              {"clusters", cluster_array}};
            return set_out(out, doc.dump(2) + "\n");
        }
        throw Error(ErrorCode::invalid_argument,
                    fmt::format("unknown clone engine '{}' (expected diff or ast)", engine));
    });
}

sm_status sm_triage(const char* clones_jsonl, const char* options_json, char** json_out) {
    return guarded([&]() -> sm_status {
        if (clones_jsonl == nullptr) {
            throw Error(ErrorCode::invalid_argument, "clones_jsonl must be non-NULL");
        }
        const auto options = parse_options(options_json);
        const int threshold = options.value("threshold", 90);
        clonetriage::CanonicalizeOptions copts;
        copts.identifier_rule = options.value("identifier_rule", false);

        std::vector<clonetriage::CloneDigest> digests;
        std::size_t start = 0;
        const std::string text(clones_jsonl);
        std::size_t counter = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            const auto line = text.substr(start, end - start);
            start = end + 1;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            json doc;
            try {
                doc = json::parse(line);
            } catch (const json::exception& e) {
                throw Error(ErrorCode::parse,
                            fmt::format("clones line {}: invalid JSON: {}", counter + 1, e.what()));
            }
            ++counter;
            const auto id = doc.value("id", fmt::format("clone-{:06}", counter));
            const auto body = doc.value("normalized_text", std::string());
            digests.push_back(clonetriage::digest(id, clonetriage::canonicalize(body, copts)));
        }
        auto clusters = clonetriage::group(digests, threshold);

        std::map<std::string, std::string> labels;
        if (options.contains("labels")) {
            for (const auto& [key, value] : options["labels"].items()) {
                labels[key] = value.get<std::string>();
            }
        }
        json cluster_array = json::array();
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            const auto id = fmt::format("cluster-{:04}", i);
            json label = nullptr;
            if (const auto it = labels.find(id); it != labels.end()) label = it->second;
            cluster_array.push_back({{"id", id},
                                     {"members", clusters[i].members},
                                     {"canonical_text", clusters[i].canonical_text},
                                     {"label", label}});
        }
        const json doc = {{"threshold", std::clamp(threshold, 0, 100)},
                          {"clusters", cluster_array}};
        return set_out(json_out, doc.dump(2) + "\n");
    });
}

sm_status sm_exp_fit_json(const char* series_json, char** json_out) {
    return guarded([&]() -> sm_status {
        const auto fit = trends::exp_fit(points_from_json(series_json));
        json doc = {{"log_slope", fit.log_slope},
                    {"annual_factor", fit.annual_factor},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"n", fit.n}};
        doc["doubling_years"] = fit.doubling_years ? json(*fit.doubling_years) : json(nullptr);
        return set_out(json_out, doc.dump(2) + "\n");
    });
}

sm_status sm_linear_fit_json(const char* series_json, char** json_out) {
    return guarded([&]() -> sm_status {
        const auto fit = trends::linear_fit(points_from_json(series_json));
        const json doc = {{"slope", fit.slope},
                          {"intercept", fit.intercept},
                          {"r_squared", fit.r_squared},
                          {"n", fit.n}};
        return set_out(json_out, doc.dump(2) + "\n");
    });
}

sm_status sm_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* d_out,
                           double* p_out) {
    return guarded([&]() -> sm_status {
        if (a == nullptr || b == nullptr) {
            throw Error(ErrorCode::invalid_argument, "samples must be non-NULL");
        }
        const auto result = trends::ks_two_sample(std::vector<double>(a, a + na),
                                                  std::vector<double>(b, b + nb));
        if (d_out != nullptr) *d_out = result.d_statistic;
        if (p_out != nullptr) *p_out = result.p_value;
        return SM_OK;
    });
}

sm_status sm_corpus_trends_json(const sm_corpus* corpus, const char* options_json,
                                char** json_out) {
    return guarded([&]() -> sm_status {
        if (corpus == nullptr) throw Error(ErrorCode::invalid_argument, "corpus must be non-NULL");
        const auto options = parse_options(options_json);
        auto cls = cocomo::ProjectClass::Organic;
        if (options.contains("cocomo_class")) {
            const auto parsed =
                cocomo::project_class_from_name(options["cocomo_class"].get<std::string>());
            if (!parsed) throw Error(ErrorCode::invalid_argument, "unknown cocomo_class");
            cls = *parsed;
        }
        const auto jobs = options.value("jobs", 1u);
        const bool aggregate = options.value("aggregate_years", false);
        const auto reports =
            report::build_sample_reports(corpus->data, report::resolve_backfire_table(),
                                         report::resolve_cocomo_coefficients(cls), jobs);
        return set_out(json_out, report::trends_to_json(reports, aggregate));
    });
}

sm_status sm_run(const char* config_json, const char* base_dir, char** summary_out) {
    return guarded([&]() -> sm_status {
        if (config_json == nullptr) {
            throw Error(ErrorCode::invalid_argument, "config_json must be non-NULL");
        }
        const auto config = report::RunConfig::from_json_text(
            config_json, base_dir != nullptr ? std::filesystem::path(base_dir)
                                             : std::filesystem::path());
        const auto result = report::run(config);
        const json doc = {{"exit_code", result.exit_code},
                          {"artifacts", result.artifacts},
                          {"errors", result.errors}};
        const auto status = set_out(summary_out, doc.dump(2) + "\n");
        if (status != SM_OK) return status;
        if (result.exit_code != 0) {
            g_last_error = result.errors.empty() ? "pipeline failed" : result.errors.front();
            return SM_ERR_INTERNAL;
        }
        return SM_OK;
    });
}

sm_status sm_compare(const char* report_a_json, const char* report_b_json,
                     const char* options_json, char** json_out) {
    return guarded([&]() -> sm_status {
        if (report_a_json == nullptr || report_b_json == nullptr) {
            throw Error(ErrorCode::invalid_argument, "both reports must be non-NULL");
        }
        const auto options = parse_options(options_json);
        auto cls = cocomo::ProjectClass::Organic;
        if (options.contains("cocomo_class")) {
            const auto parsed =
                cocomo::project_class_from_name(options["cocomo_class"].get<std::string>());
            if (!parsed) throw Error(ErrorCode::invalid_argument, "unknown cocomo_class");
            cls = *parsed;
        }
        const auto a = report::sample_reports_from_json(report_a_json);
        const auto b = report::sample_reports_from_json(report_b_json);
        const auto result = report::compare(a, b, report::resolve_backfire_table(),
                                            report::resolve_cocomo_coefficients(cls));
        return set_out(json_out, report::compare_to_json(result));
    });
}

}  // extern "C"
