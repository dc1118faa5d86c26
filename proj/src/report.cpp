// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <tuple>

#include "json.hpp"
#include "srcmetry/clonetriage.hpp"
#include "srcmetry/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace srcmetry::report {

namespace {

fs::path resolve(const fs::path& p, const fs::path& base) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, fmt::format("config: invalid JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw Error(ErrorCode::parse, "config: expected an object");

    RunConfig cfg;
    if (!doc.contains("manifest") || !doc["manifest"].is_string()) {
        throw Error(ErrorCode::parse, "config.manifest: required string");
    }
    cfg.manifest = resolve(doc["manifest"].get<std::string>(), base_dir);
    if (!doc.contains("output_dir") || !doc["output_dir"].is_string()) {
        throw Error(ErrorCode::parse, "config.output_dir: required string");
    }
    cfg.output_dir = resolve(doc["output_dir"].get<std::string>(), base_dir);

    if (doc.contains("cocomo_class")) {
        const auto cls = cocomo::project_class_from_name(doc["cocomo_class"].get<std::string>());
        if (!cls) {
            throw Error(ErrorCode::parse,
                        fmt::format("config.cocomo_class: unknown class '{}'",
                                    doc["cocomo_class"].get<std::string>()));
        }
        cfg.cocomo_class = *cls;
    }
    if (doc.contains("stages")) {
        if (!doc["stages"].is_array()) throw Error(ErrorCode::parse, "config.stages: expected array");
        cfg.stages.clear();
        for (const auto& stage : doc["stages"]) {
            const auto name = stage.get<std::string>();
            if (name != "metrics" && name != "clones" && name != "triage" && name != "trends") {
                throw Error(ErrorCode::parse, fmt::format("config.stages: unknown stage '{}'", name));
            }
            cfg.stages.insert(name);
        }
    }
    if (doc.contains("clone_engine")) {
        cfg.clone_engine = doc["clone_engine"].get<std::string>();
        if (cfg.clone_engine != "diff" && cfg.clone_engine != "ast" && cfg.clone_engine != "both") {
            throw Error(ErrorCode::parse,
                        fmt::format("config.clone_engine: expected diff|ast|both, got '{}'",
                                    cfg.clone_engine));
        }
    }
    cfg.raw_clones = doc.value("raw_clones", false);
    if (doc.contains("thresholds")) {
        for (const auto& [key, value] : doc["thresholds"].items()) {
            const auto lang = language_from_name(key);
            if (!lang) {
                throw Error(ErrorCode::parse,
                            fmt::format("config.thresholds: unknown language '{}'", key));
            }
            cfg.diff_thresholds.per_language[*lang] = value.get<int>();
        }
    }
    if (doc.contains("min_sloc_fallback")) {
        cfg.diff_thresholds.fallback = doc["min_sloc_fallback"].get<int>();
    }
    cfg.ast_params.min_tokens = doc.value("min_tokens", cfg.ast_params.min_tokens);
    cfg.ast_params.stride = doc.value("stride", cfg.ast_params.stride);
    cfg.ast_params.similarity = doc.value("similarity", cfg.ast_params.similarity);
    cfg.triage_threshold = doc.value("triage_threshold", cfg.triage_threshold);
    cfg.triage_identifier_rule = doc.value("triage_identifier_rule", cfg.triage_identifier_rule);
    cfg.aggregate_years = doc.value("aggregate_years", cfg.aggregate_years);
    cfg.emit_svg = doc.value("svg", cfg.emit_svg);
    cfg.jobs = doc.value("jobs", cfg.jobs);
    cfg.seed = doc.value("seed", cfg.seed);
    return cfg;
}

RunConfig RunConfig::from_json_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::io, fmt::format("cannot open config '{}'", file.string()));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text, file.has_parent_path() ? file.parent_path() : fs::path("."));
}

sizing::BackfireTable resolve_backfire_table() {
    if (const char* dir = std::getenv("SRCMETRY_TABLE_DIR")) {
        const auto file = fs::path(dir) / "backfire.json";
        if (fs::exists(file)) return sizing::BackfireTable::from_json_file(file);
    }
    return sizing::BackfireTable::defaults();
}

cocomo::Coefficients resolve_cocomo_coefficients(cocomo::ProjectClass cls) {
    if (const char* dir = std::getenv("SRCMETRY_TABLE_DIR")) {
        const auto file = fs::path(dir) / "cocomo.json";
        if (fs::exists(file)) return cocomo::Coefficients::from_json_file(file, cls);
    }
    return cocomo::Coefficients::defaults(cls);
}

std::vector<SampleReport> build_sample_reports(const corpus::Corpus& corpus,
                                               const sizing::BackfireTable& table,
                                               const cocomo::Coefficients& coeffs,
                                               unsigned jobs) {
    std::vector<SampleReport> reports(corpus.samples.size());
    util::parallel_for(corpus.samples.size(), jobs, [&](std::size_t i) {
        const auto& sample = corpus.samples[i];
        auto& rep = reports[i];
        rep.id = sample.id;
        rep.name = sample.name;
        rep.year = sample.year;
        rep.category = sample.category;

        const auto files = corpus.files_of(sample.id);
        rep.file_count = static_cast<int>(files.size());

        std::vector<std::pair<Language, linecount::LineTally>> tallies;
        for (const auto* file : files) {
            const auto* syntax = linecount::syntax_for(file->language);
            if (syntax == nullptr) continue;
            tallies.emplace_back(file->language,
                                 linecount::tally_file(*file, *syntax, &rep.warnings));
        }
        auto agg = linecount::aggregate(tallies);
        rep.per_language = std::move(agg.per_language);
        rep.total = agg.total;
        rep.language_count = static_cast<int>(rep.per_language.size());
        rep.function_points = sizing::function_points(rep.per_language, table, &rep.warnings);
        if (rep.total.sloc > 0) {
            rep.cost = cocomo::estimate(static_cast<double>(rep.total.sloc) / 1000.0, coeffs);
        }
        rep.comment_ratio = linecount::comment_ratio(rep.total);
        rep.quality = structure::analyze_sample(files, 1, &rep.warnings);
    });
    return reports;
}

// ---- serialization ---------------------------------------------------------

namespace {

json tally_to_json(const linecount::LineTally& tally) {
    return {{"sloc", tally.sloc},
            {"comment_lines", tally.comment_lines},
            {"blank_lines", tally.blank_lines},
            {"total_lines", tally.total_lines}};
}

linecount::LineTally tally_from_json(const json& doc) {
    linecount::LineTally tally;
    tally.sloc = doc.value("sloc", std::int64_t{0});
    tally.comment_lines = doc.value("comment_lines", std::int64_t{0});
    tally.blank_lines = doc.value("blank_lines", std::int64_t{0});
    tally.total_lines = doc.value("total_lines", std::int64_t{0});
    return tally;
}

json sample_to_json(const SampleReport& rep) {
    json per_language = json::object();
    for (const auto& [lang, tally] : rep.per_language) {
        per_language[std::string(to_string(lang))] = tally_to_json(tally);
    }
    json doc = {
        {"id", rep.id},
        {"name", rep.name},
        {"year", rep.year},
        {"category", std::string(to_string(rep.category))},
        {"files", rep.file_count},
        {"languages", rep.language_count},
        {"per_language", per_language},
        {"total", tally_to_json(rep.total)},
        {"fp", rep.function_points},
        {"warnings", rep.warnings},
    };
    if (rep.cost) {
        doc["cocomo"] = {{"effort", rep.cost->effort_man_months},
                         {"duration", rep.cost->duration_months},
                         {"people", rep.cost->people},
                         {"kloc", rep.cost->kloc}};
    } else {
        doc["cocomo"] = nullptr;
    }
    doc["comment_ratio"] = rep.comment_ratio ? json(*rep.comment_ratio) : json(nullptr);
    if (rep.quality) {
        json cc_values = json::array();
        for (const auto& fn : rep.quality->per_function_cc) cc_values.push_back(fn.cc);
        doc["quality"] = {{"avg_cc", rep.quality->avg_cc},
                          {"avg_halstead_volume", rep.quality->avg_halstead_volume},
                          {"avg_sloc_per_module", rep.quality->avg_sloc_per_module},
                          {"mi", rep.quality->mi},
                          {"mi_upper_bound", rep.quality->mi_upper_bound},
                          {"low_maintainability", rep.quality->low_maintainability},
                          {"modules", rep.quality->modules},
                          {"function_cc", cc_values}};
    } else {
        doc["quality"] = nullptr;
    }
    return doc;
}

SampleReport sample_from_json(const json& doc) {
    SampleReport rep;
    rep.id = doc.value("id", "");
    rep.name = doc.value("name", "");
    rep.year = doc.value("year", 0);
    rep.category = category_from_name(doc.value("category", "UNKNOWN")).value_or(Category::Unknown);
    rep.file_count = doc.value("files", 0);
    rep.language_count = doc.value("languages", 0);
    if (doc.contains("per_language")) {
        for (const auto& [key, value] : doc["per_language"].items()) {
            if (const auto lang = language_from_name(key)) {
                rep.per_language[*lang] = tally_from_json(value);
            }
        }
    }
    if (doc.contains("total")) rep.total = tally_from_json(doc["total"]);
    rep.function_points = doc.value("fp", 0.0);
    if (doc.contains("cocomo") && doc["cocomo"].is_object()) {
        cocomo::CostEstimate cost;
        cost.effort_man_months = doc["cocomo"].value("effort", 0.0);
        cost.duration_months = doc["cocomo"].value("duration", 0.0);
        cost.people = doc["cocomo"].value("people", 0.0);
        cost.kloc = doc["cocomo"].value("kloc", 0.0);
        rep.cost = cost;
    }
    if (doc.contains("comment_ratio") && doc["comment_ratio"].is_number()) {
        rep.comment_ratio = doc["comment_ratio"].get<double>();
    }
    if (doc.contains("quality") && doc["quality"].is_object()) {
        structure::QualityReport q;
        const auto& qq = doc["quality"];
        q.avg_cc = qq.value("avg_cc", 0.0);
        q.avg_halstead_volume = qq.value("avg_halstead_volume", 0.0);
        q.avg_sloc_per_module = qq.value("avg_sloc_per_module", 0.0);
        q.mi = qq.value("mi", 0.0);
        q.mi_upper_bound = qq.value("mi_upper_bound", 0.0);
        q.low_maintainability = qq.value("low_maintainability", false);
        q.modules = qq.value("modules", 0);
        if (qq.contains("function_cc")) {
            for (const auto& cc : qq["function_cc"]) {
                q.per_function_cc.push_back({structure::FunctionSpan{}, cc.get<int>()});
            }
        }
        rep.quality = std::move(q);
    }
    if (doc.contains("warnings")) {
        for (const auto& w : doc["warnings"]) rep.warnings.push_back(w.get<std::string>());
    }
    return rep;
}

}  // namespace

std::string sample_reports_to_json(const std::vector<SampleReport>& reports) {
    json samples = json::array();
    for (const auto& rep : reports) samples.push_back(sample_to_json(rep));
    return json{{"samples", samples}}.dump(2) + "\n";
}

std::vector<SampleReport> sample_reports_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, fmt::format("report: invalid JSON: {}", e.what()));
    }
    std::vector<SampleReport> reports;
    if (doc.contains("samples")) {
        for (const auto& entry : doc["samples"]) reports.push_back(sample_from_json(entry));
    }
    return reports;
}

// ---- artifacts --------------------------------------------------------------

namespace {

std::string fmt_opt(const std::optional<double>& value) {
    return value ? fmt::format("{}", *value) : "";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
    out << content;
}

std::string samples_csv(const std::vector<SampleReport>& reports) {
    std::string csv = "id,year,category,files,languages,sloc,fp,E,D,P,avg_cc,mi,comment_ratio\n";
    for (const auto& rep : reports) {
        csv += fmt::format(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", rep.id, rep.year,
            to_string(rep.category), rep.file_count, rep.language_count, rep.total.sloc,
            fmt::format("{}", rep.function_points),
            rep.cost ? fmt::format("{}", rep.cost->effort_man_months) : "",
            rep.cost ? fmt::format("{}", rep.cost->duration_months) : "",
            rep.cost ? fmt::format("{}", rep.cost->people) : "",
            rep.quality ? fmt::format("{}", rep.quality->avg_cc) : "",
            rep.quality ? fmt::format("{}", rep.quality->mi) : "", fmt_opt(rep.comment_ratio));
    }
    return csv;
}

std::string clones_jsonl(const std::vector<clonediff::CloneMatch>& matches) {
    std::string out;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        const auto& m = matches[i];
        const json doc = {
            {"id", fmt::format("clone-{:06}", i + 1)},
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
            {"normalized_text", m.normalized_text},
        };
        out += doc.dump();
        out += '\n';
    }
    return out;
}

std::string ast_clusters_json(const std::vector<cloneast::VectorCluster>& clusters,
                              const cloneast::Params& params,
                              const cloneast::ParseStats& stats) {
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
    return doc.dump(2) + "\n";
}

std::string triage_clusters_json(const std::vector<clonetriage::TriageCluster>& clusters,
                                 int threshold, const std::map<std::string, std::string>& labels) {
    json cluster_array = json::array();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const auto& cluster = clusters[i];
        const auto id = fmt::format("cluster-{:04}", i);
        json label = nullptr;
        if (cluster.label) label = *cluster.label;
        if (const auto it = labels.find(id); it != labels.end()) label = it->second;
        cluster_array.push_back({{"id", id},
                                 {"members", cluster.members},
                                 {"canonical_text", cluster.canonical_text},
                                 {"label", label}});
    }
    return json{{"threshold", threshold}, {"clusters", cluster_array}}.dump(2) + "\n";
}

json growth_to_json(const trends::GrowthFit& fit) {
    json doc = {{"log_slope", fit.log_slope},
                {"annual_factor", fit.annual_factor},
                {"intercept", fit.intercept},
                {"r_squared", fit.r_squared},
                {"n", fit.n}};
    doc["doubling_years"] = fit.doubling_years ? json(*fit.doubling_years) : json(nullptr);
    return doc;
}

json linear_to_json(const trends::LinearFit& fit) {
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},
            {"n", fit.n}};
}

json fit_or_error_exp(std::vector<trends::TimeSeriesPoint> points, bool aggregate) {
    try {
        if (aggregate) points = trends::aggregate_by_year(points);
        return growth_to_json(trends::exp_fit(points));
    } catch (const Error& e) {
        return {{"error", e.what()}};
    }
}

json fit_or_error_linear(std::vector<trends::TimeSeriesPoint> points, bool aggregate) {
    try {
        if (aggregate) points = trends::aggregate_by_year(points);
        return linear_to_json(trends::linear_fit(points));
    } catch (const Error& e) {
        return {{"error", e.what()}};
    }
}

struct PlotSeries {
    std::string name;
    std::vector<std::tuple<int, double, std::string>> rows;  // year, value, id
};

std::string tsv_by_year(const PlotSeries& series) {
    std::string out = "year\tvalue\tid\n";
    auto rows = series.rows;
    std::sort(rows.begin(), rows.end());
    for (const auto& [year, value, id] : rows) {
        out += fmt::format("{}\t{}\t{}\n", year, value, id);
    }
    return out;
}

std::string tsv_hist(const std::vector<std::pair<std::string, std::int64_t>>& bins) {
    std::string out = "bin\tcount\n";
    for (const auto& [bin, count] : bins) out += fmt::format("{}\t{}\n", bin, count);
    return out;
}

// Minimal fixed-styling SVG scatter (year on x, value on y).
std::string scatter_svg(const PlotSeries& series) {
    constexpr int w = 640, h = 400, margin = 48;
    auto rows = series.rows;
    std::sort(rows.begin(), rows.end());
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (const auto& [year, value, id] : rows) {
        min_x = std::min(min_x, static_cast<double>(year));
        max_x = std::max(max_x, static_cast<double>(year));
        min_y = std::min(min_y, value);
        max_y = std::max(max_y, value);
    }
    if (rows.empty()) min_x = max_x = min_y = max_y = 0.0;
    if (max_x == min_x) max_x = min_x + 1.0;
    if (max_y == min_y) max_y = min_y + 1.0;
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<line x1=\"{m}\" y1=\"{ym}\" x2=\"{xm}\" y2=\"{ym}\" stroke=\"black\"/>\n"
        "<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{ym}\" stroke=\"black\"/>\n"
        "<text x=\"{m}\" y=\"20\" font-family=\"monospace\" font-size=\"14\">{title}</text>\n",
        w, h, fmt::arg("m", margin), fmt::arg("xm", w - margin), fmt::arg("ym", h - margin),
        fmt::arg("title", series.name));
    for (const auto& [year, value, id] : rows) {
        const double px =
            margin + (static_cast<double>(year) - min_x) / (max_x - min_x) * (w - 2 * margin);
        const double py =
            (h - margin) - (value - min_y) / (max_y - min_y) * (h - 2 * margin);
        svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"steelblue\"/>\n",
                           px, py);
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<std::pair<std::string, std::int64_t>> cc_histogram(
    const std::vector<SampleReport>& reports) {
    std::vector<std::int64_t> counts(20, 0);
    for (const auto& rep : reports) {
        if (!rep.quality) continue;
        for (const auto& fn : rep.quality->per_function_cc) {
            const int bin = std::clamp(fn.cc, 1, 20) - 1;
            ++counts[static_cast<std::size_t>(bin)];
        }
    }
    std::vector<std::pair<std::string, std::int64_t>> bins;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto label =
            i + 1 == counts.size() ? fmt::format("{}+", i + 1) : fmt::format("{}", i + 1);
        bins.emplace_back(label, counts[i]);
    }
    return bins;
}

std::vector<std::pair<std::string, std::int64_t>> mi_histogram(
    const std::vector<SampleReport>& reports) {
    std::vector<std::pair<std::string, std::int64_t>> bins = {
        {"0-25", 0}, {"25-50", 0}, {"50-75", 0}, {"75-100", 0}};
    for (const auto& rep : reports) {
        if (!rep.quality) continue;
        const double mi = std::clamp(rep.quality->mi, 0.0, 100.0);
        const auto idx = std::min<std::size_t>(3, static_cast<std::size_t>(mi / 25.0));
        ++bins[idx].second;
    }
    return bins;
}

std::vector<std::pair<std::string, std::int64_t>> clone_size_histogram(
    const std::vector<clonediff::CloneMatch>& matches) {
    const std::vector<std::pair<int, int>> edges = {
        {1, 10}, {10, 20}, {20, 50}, {50, 100}, {100, 200}, {200, 500}, {500, 1000}};
    std::vector<std::pair<std::string, std::int64_t>> bins;
    for (const auto& [lo, hi] : edges) bins.emplace_back(fmt::format("{}-{}", lo, hi - 1), 0);
    bins.emplace_back("1000+", 0);
    for (const auto& m : matches) {
        std::size_t idx = edges.size();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (m.length_sloc >= edges[i].first && m.length_sloc < edges[i].second) {
                idx = i;
                break;
            }
        }
        ++bins[idx].second;
    }
    return bins;
}

}  // namespace

std::string trends_to_json(const std::vector<SampleReport>& reports, bool aggregate_years) {
    std::vector<trends::TimeSeriesPoint> files, sloc, fp, effort, duration, people;
    for (const auto& rep : reports) {
        if (rep.file_count > 0) files.push_back({rep.year, static_cast<double>(rep.file_count)});
        if (rep.total.sloc > 0) sloc.push_back({rep.year, static_cast<double>(rep.total.sloc)});
        if (rep.function_points > 0) fp.push_back({rep.year, rep.function_points});
        if (rep.cost) {
            effort.push_back({rep.year, rep.cost->effort_man_months});
            duration.push_back({rep.year, rep.cost->duration_months});
            people.push_back({rep.year, rep.cost->people});
        }
    }
    const json doc = {
        {"aggregate_years", aggregate_years},
        {"series",
         {{"files", fit_or_error_exp(files, aggregate_years)},
          {"sloc", fit_or_error_exp(sloc, aggregate_years)},
          {"fp", fit_or_error_exp(fp, aggregate_years)},
          {"effort", fit_or_error_exp(effort, aggregate_years)},
          {"duration_linear", fit_or_error_linear(duration, aggregate_years)},
          {"people_linear", fit_or_error_linear(people, aggregate_years)}}},
    };
    return doc.dump(2) + "\n";
}

RunResult run(const RunConfig& config) {
    RunResult result;
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw Error(ErrorCode::io, fmt::format("cannot create output dir '{}': {}",
                                               config.output_dir.string(), ec.message()));
    }

    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file(config.output_dir / name, content);
        result.artifacts.push_back(name);
    };
    const auto fail = [&](const std::string& stage, const std::string& message) {
        result.exit_code = 1;
        result.errors.push_back(fmt::format("{}: {}", stage, message));
        write_file(config.output_dir / "FAILED", fmt::format("{}: {}\n", stage, message));
    };

    corpus::Corpus corpus;
    try {
        corpus = corpus::load(config.manifest, config.jobs);
    } catch (const std::exception& e) {
        fail("scan", e.what());
        return result;
    }

    std::vector<SampleReport> reports;
    const bool need_metrics = config.stages.contains("metrics") || config.stages.contains("trends");
    if (need_metrics) {
        try {
            reports = build_sample_reports(corpus, resolve_backfire_table(),
                                           resolve_cocomo_coefficients(config.cocomo_class),
                                           config.jobs);
        } catch (const std::exception& e) {
            fail("metrics", e.what());
            return result;
        }
    }

    if (config.stages.contains("metrics")) {
        try {
            emit("samples.csv", samples_csv(reports));
            emit("report.json", sample_reports_to_json(reports));

            PlotSeries files{"files_by_year", {}};
            PlotSeries sloc{"sloc_by_year", {}};
            PlotSeries fp{"fp_by_year", {}};
            PlotSeries langs{"languages_by_year", {}};
            PlotSeries effort{"effort_by_year", {}};
            PlotSeries duration{"duration_by_year", {}};
            PlotSeries people{"people_by_year", {}};
            PlotSeries ratio{"comment_ratio_by_year", {}};
            for (const auto& rep : reports) {
                files.rows.emplace_back(rep.year, rep.file_count, rep.id);
                sloc.rows.emplace_back(rep.year, rep.total.sloc, rep.id);
                fp.rows.emplace_back(rep.year, rep.function_points, rep.id);
                langs.rows.emplace_back(rep.year, rep.language_count, rep.id);
                if (rep.cost) {
                    effort.rows.emplace_back(rep.year, rep.cost->effort_man_months, rep.id);
                    duration.rows.emplace_back(rep.year, rep.cost->duration_months, rep.id);
                    people.rows.emplace_back(rep.year, rep.cost->people, rep.id);
                }
                if (rep.comment_ratio) ratio.rows.emplace_back(rep.year, *rep.comment_ratio, rep.id);
            }
            for (const auto* series :
                 {&files, &sloc, &fp, &langs, &effort, &duration, &people, &ratio}) {
                emit(fmt::format("plot_{}.tsv", series->name), tsv_by_year(*series));
                if (config.emit_svg) {
                    emit(fmt::format("plot_{}.svg", series->name), scatter_svg(*series));
                }
            }
            emit("plot_cc_hist.tsv", tsv_hist(cc_histogram(reports)));
            emit("plot_mi_hist.tsv", tsv_hist(mi_histogram(reports)));
        } catch (const std::exception& e) {
            fail("metrics", e.what());
            return result;
        }
    }

    std::vector<clonediff::CloneMatch> matches;
    const bool need_diff_clones =
        (config.stages.contains("clones") && config.clone_engine != "ast") ||
        config.stages.contains("triage");
    if (need_diff_clones) {
        try {
            matches = clonediff::detect_corpus(corpus, config.diff_thresholds, !config.raw_clones,
                                               config.jobs);
        } catch (const std::exception& e) {
            fail("clones", e.what());
            return result;
        }
    }

    if (config.stages.contains("clones")) {
        try {
            if (config.clone_engine != "ast") {
                emit("clones.jsonl", clones_jsonl(matches));
                emit("plot_clone_sloc_hist.tsv", tsv_hist(clone_size_histogram(matches)));
            }
            if (config.clone_engine != "diff") {
                cloneast::ParseStats stats;
                const auto clusters =
                    cloneast::detect_corpus(corpus, config.ast_params, config.jobs, &stats);
                emit("ast_clusters.json", ast_clusters_json(clusters, config.ast_params, stats));
            }
        } catch (const std::exception& e) {
            fail("clones", e.what());
            return result;
        }
    }

    if (config.stages.contains("triage")) {
        try {
            clonetriage::CanonicalizeOptions opts;
            opts.identifier_rule = config.triage_identifier_rule;
            std::vector<clonetriage::CloneDigest> digests;
            digests.reserve(matches.size());
            for (std::size_t i = 0; i < matches.size(); ++i) {
                const auto id = fmt::format("clone-{:06}", i + 1);
                digests.push_back(clonetriage::digest(
                    id, clonetriage::canonicalize(matches[i].normalized_text, opts)));
            }
            const auto clusters = clonetriage::group(digests, config.triage_threshold);
            emit("clusters.json", triage_clusters_json(clusters, config.triage_threshold, {}));
        } catch (const std::exception& e) {
            fail("triage", e.what());
            return result;
        }
    }

    if (config.stages.contains("trends")) {
        try {
            emit("trends.json", trends_to_json(reports, config.aggregate_years));
        } catch (const std::exception& e) {
            fail("trends", e.what());
            return result;
        }
    }

    std::sort(result.artifacts.begin(), result.artifacts.end());
    return result;
}

// ---- compare ----------------------------------------------------------------

CompareResult compare(const std::vector<SampleReport>& a, const std::vector<SampleReport>& b,
                      const sizing::BackfireTable& table, const cocomo::Coefficients& coeffs) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::domain, "compare requires two non-empty report sets");
    }
    CompareResult result;
    const auto add_rows = [&](const std::vector<SampleReport>& set, const std::string& name) {
        auto sorted = set;
        std::sort(sorted.begin(), sorted.end(),
                  [](const SampleReport& x, const SampleReport& y) { return x.id < y.id; });
        for (const auto& rep : sorted) {
            CompareRow row;
            row.set_name = name;
            row.id = rep.id;
            row.year = rep.year;
            if (rep.total.sloc > 0) {
                row.metrics.sloc = static_cast<double>(rep.total.sloc);
                const auto est =
                    cocomo::estimate(static_cast<double>(rep.total.sloc) / 1000.0, coeffs);
                row.metrics.effort = est.effort_man_months;
                row.metrics.duration = est.duration_months;
                row.metrics.people = est.people;
                row.metrics.fp = sizing::function_points(rep.per_language, table);
            }
            if (rep.quality) {
                row.metrics.cc = rep.quality->avg_cc;
                row.metrics.mi = rep.quality->mi;
            }
            row.metrics.cr = rep.comment_ratio;
            result.rows.push_back(std::move(row));
        }
    };
    add_rows(a, "a");
    add_rows(b, "b");

    const auto collect_cc = [](const std::vector<SampleReport>& set) {
        std::vector<double> values;
        for (const auto& rep : set) {
            if (!rep.quality) continue;
            for (const auto& fn : rep.quality->per_function_cc) {
                values.push_back(static_cast<double>(fn.cc));
            }
        }
        return values;
    };
    const auto cc_a = collect_cc(a);
    const auto cc_b = collect_cc(b);
    if (!cc_a.empty() && !cc_b.empty()) {
        result.cc_ks = trends::ks_two_sample(cc_a, cc_b);
        int max_cc = 1;
        for (const auto v : cc_a) max_cc = std::max(max_cc, static_cast<int>(v));
        for (const auto v : cc_b) max_cc = std::max(max_cc, static_cast<int>(v));
        max_cc = std::min(max_cc, 50);
        trends::Histogram ha, hb;
        for (int e = 1; e <= max_cc + 1; ++e) ha.edges.push_back(static_cast<double>(e));
        hb.edges = ha.edges;
        ha.counts.assign(ha.edges.size() - 1, 0.0);
        hb.counts.assign(hb.edges.size() - 1, 0.0);
        const auto fill = [&](const std::vector<double>& values, trends::Histogram& hist) {
            for (const auto v : values) {
                const auto idx = static_cast<std::size_t>(
                    std::clamp(static_cast<int>(v), 1, max_cc) - 1);
                hist.counts[idx] += 1.0;
            }
        };
        fill(cc_a, ha);
        fill(cc_b, hb);
        try {
            result.cc_chi = trends::chi_square_hist(ha, hb);
        } catch (const Error&) {
            result.cc_chi = std::nullopt;  // e.g. everything pools into one bin
        }
    }
    return result;
}

std::string compare_to_json(const CompareResult& result) {
    json rows = json::array();
    for (const auto& row : result.rows) {
        json metrics = json::object();
        const auto put = [&](const char* key, const std::optional<double>& value) {
            metrics[key] = value ? json(*value) : json(nullptr);
        };
        put("sloc", row.metrics.sloc);
        put("E", row.metrics.effort);
        put("D", row.metrics.duration);
        put("P", row.metrics.people);
        put("fp", row.metrics.fp);
        put("cc", row.metrics.cc);
        put("cr", row.metrics.cr);
        put("mi", row.metrics.mi);
        rows.push_back(
            {{"set", row.set_name}, {"id", row.id}, {"year", row.year}, {"metrics", metrics}});
    }
    json doc = {{"rows", rows}};
    doc["cc_ks"] = result.cc_ks ? json{{"d", result.cc_ks->d_statistic},
                                       {"p", result.cc_ks->p_value}}
                                : json(nullptr);
    doc["cc_chi"] = result.cc_chi ? json{{"statistic", result.cc_chi->statistic},
                                         {"dof", result.cc_chi->dof},
                                         {"p", result.cc_chi->p_value}}
                                  : json(nullptr);
    return doc.dump(2) + "\n";
}

}  // namespace srcmetry::report
