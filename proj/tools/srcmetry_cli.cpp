// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0
//
// srcmetry command line front end. Talks to the engine exclusively through
// the C API in srcmetry.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "srcmetry.h"

using nlohmann::json;

namespace {

struct StringDeleter {
    void operator()(char* s) const { sm_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

[[noreturn]] void die(const std::string& context) {
    std::cerr << "srcmetry: " << context << ": " << sm_last_error() << "\n";
    std::exit(1);
}

struct CorpusDeleter {
    void operator()(sm_corpus* c) const { sm_corpus_free(c); }
};
using Corpus = std::unique_ptr<sm_corpus, CorpusDeleter>;

Corpus load_corpus(const std::string& manifest, int jobs) {
    sm_corpus* corpus = nullptr;
    if (sm_corpus_load(manifest.c_str(), jobs, &corpus) != SM_OK) die("loading corpus");
    return Corpus(corpus);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "srcmetry: cannot open '" << path << "'\n";
        std::exit(1);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& content, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) {
        std::cerr << "srcmetry: cannot write '" << output << "'\n";
        std::exit(1);
    }
    out << content;
}

struct GlobalOptions {
    std::string config_path;
    int jobs = 1;
    std::uint64_t seed = 0;
    json config = json::object();

    void load() {
        if (!config_path.empty()) {
            config = json::parse(read_file(config_path));
        }
    }
    std::string manifest_default() const { return config.value("manifest", std::string()); }
};

std::string require_manifest(const GlobalOptions& global, const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const auto fallback = global.manifest_default();
    if (fallback.empty()) {
        std::cerr << "srcmetry: no manifest given (use --manifest or --config)\n";
        std::exit(1);
    }
    return fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"srcmetry - source corpus metrics, cost estimation, and clone detection"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--config", global.config_path, "JSON config file with defaults");
    app.add_option("--jobs", global.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", global.seed, "RNG seed recorded into run configs");

    std::string manifest, output;

    // scan
    auto* scan = app.add_subcommand("scan", "scan a corpus and print per-sample file counts");
    scan->add_option("--manifest", manifest, "manifest JSON file");
    scan->add_option("-o,--output", output, "output file (default stdout)");

    // metrics
    std::string cocomo_class = "organic";
    auto* metrics = app.add_subcommand("metrics", "line tallies, function points, quality");
    metrics->add_option("--manifest", manifest, "manifest JSON file");
    metrics->add_option("--cocomo-class", cocomo_class, "organic|semidetached|embedded");
    metrics->add_option("-o,--output", output, "output file (default stdout)");

    // cocomo
    double kloc = 0.0;
    std::int64_t sloc = 0;
    auto* cocomo = app.add_subcommand("cocomo", "Basic COCOMO estimate for a given size");
    auto* kloc_opt = cocomo->add_option("--kloc", kloc, "size in thousands of SLOC");
    cocomo->add_option("--sloc", sloc, "size in SLOC (alternative to --kloc)");
    cocomo->add_option("--class", cocomo_class, "organic|semidetached|embedded");

    // clones
    std::string engine = "diff";
    bool raw = false;
    int min_tokens = 100, stride = 2;
    double similarity = 1.0;
    std::vector<std::string> threshold_args;
    auto* clones = app.add_subcommand("clones", "detect code clones across samples");
    clones->add_option("--manifest", manifest, "manifest JSON file");
    clones->add_option("--engine", engine, "diff|ast")
        ->check(CLI::IsMember({"diff", "ast"}));
    clones->add_flag("--raw", raw, "diff engine: skip normalization");
    clones->add_option("--threshold", threshold_args,
                       "diff engine: LANG=MIN_SLOC (repeatable), e.g. Assembly=10");
    clones->add_option("--min-tokens", min_tokens, "ast engine: minimum clone size in tokens");
    clones->add_option("--stride", stride, "ast engine: sibling window width");
    clones->add_option("--similarity", similarity, "ast engine: cluster similarity in (0,1]");
    clones->add_option("-o,--output", output, "output file (default stdout)");

    // triage
    std::string clones_path, labels_path;
    int triage_threshold = 90;
    bool identifier_rule = false;
    auto* triage = app.add_subcommand("triage", "group near-identical clones for review");
    triage->add_option("--clones", clones_path, "clones.jsonl from the diff engine")->required();
    triage->add_option("--threshold", triage_threshold, "similarity threshold 0-100");
    triage->add_flag("--identifier-rule", identifier_rule,
                     "canonicalize identifiers longer than one char to #ID");
    triage->add_option("--labels", labels_path, "JSON {cluster-id: label} annotations to merge");
    triage->add_option("-o,--output", output, "output file (default stdout)");

    // trends
    bool aggregate_years = false;
    std::string series_path, fit_kind = "exp";
    auto* trends = app.add_subcommand("trends", "growth-rate regressions over the corpus");
    trends->add_option("--manifest", manifest, "manifest JSON file");
    trends->add_flag("--aggregate-years", aggregate_years, "average per year before fitting");
    trends->add_option("--series", series_path,
                       "fit a raw {\"points\": [{year, value}...]} file instead of a corpus");
    trends->add_option("--fit", fit_kind, "exp|linear (with --series)")
        ->check(CLI::IsMember({"exp", "linear"}));
    trends->add_option("--cocomo-class", cocomo_class, "organic|semidetached|embedded");
    trends->add_option("-o,--output", output, "output file (default stdout)");

    // compare
    std::string report_a, report_b;
    auto* compare = app.add_subcommand("compare", "compare two report.json metric sets");
    compare->add_option("--report-a", report_a, "first report.json")->required();
    compare->add_option("--report-b", report_b, "second report.json")->required();
    compare->add_option("--cocomo-class", cocomo_class, "organic|semidetached|embedded");
    compare->add_option("-o,--output", output, "output file (default stdout)");

    // report
    std::string output_dir;
    std::vector<std::string> stages;
    bool svg = false;
    auto* report = app.add_subcommand("report", "run the full pipeline and write artifacts");
    report->add_option("--manifest", manifest, "manifest JSON file");
    report->add_option("--output-dir", output_dir, "artifact directory");
    report->add_option("--stages", stages, "subset of metrics,clones,triage,trends");
    report->add_option("--engine", engine, "clone engine: diff|ast|both")
        ->check(CLI::IsMember({"diff", "ast", "both"}));
    report->add_flag("--raw", raw, "diff engine: skip normalization");
    report->add_option("--cocomo-class", cocomo_class, "organic|semidetached|embedded");
    report->add_option("--min-tokens", min_tokens, "ast engine: minimum clone size in tokens");
    report->add_option("--stride", stride, "ast engine: sibling window width");
    report->add_option("--similarity", similarity, "ast engine: cluster similarity in (0,1]");
    report->add_option("--triage-threshold", triage_threshold, "triage similarity threshold");
    report->add_flag("--aggregate-years", aggregate_years, "trends: average per year");
    report->add_flag("--svg", svg, "also render minimal SVG plots");

    CLI11_PARSE(app, argc, argv);
    global.load();

    if (scan->parsed()) {
        const auto corpus = load_corpus(require_manifest(global, manifest), global.jobs);
        ApiString out;
        char* raw_out = nullptr;
        if (sm_corpus_summary_json(corpus.get(), &raw_out) != SM_OK) die("scan");
        out.reset(raw_out);
        write_output(out.get(), output);
        return 0;
    }

    if (metrics->parsed()) {
        const auto corpus = load_corpus(require_manifest(global, manifest), global.jobs);
        const json options = {{"cocomo_class", cocomo_class}, {"jobs", global.jobs}};
        char* raw_out = nullptr;
        if (sm_corpus_metrics_json(corpus.get(), options.dump().c_str(), &raw_out) != SM_OK) {
            die("metrics");
        }
        ApiString out(raw_out);
        write_output(out.get(), output);
        return 0;
    }

    if (cocomo->parsed()) {
        double size_kloc = kloc;
        if (kloc_opt->count() == 0) {
            if (sloc <= 0) {
                std::cerr << "srcmetry: cocomo needs --kloc or --sloc\n";
                return 1;
            }
            size_kloc = static_cast<double>(sloc) / 1000.0;
        }
        double e = 0.0, d = 0.0, p = 0.0;
        if (sm_cocomo_estimate(size_kloc, cocomo_class.c_str(), &e, &d, &p) != SM_OK) {
            die("cocomo");
        }
        std::printf("kloc      %.6g\n", size_kloc);
        std::printf("effort    %.2f man-months\n", e);
        std::printf("duration  %.2f months\n", d);
        std::printf("people    %.2f\n", p);
        return 0;
    }

    if (clones->parsed()) {
        const auto corpus = load_corpus(require_manifest(global, manifest), global.jobs);
        json options = {{"engine", engine}, {"jobs", global.jobs}};
        if (engine == "diff") {
            options["raw"] = raw;
            if (!threshold_args.empty()) {
                json thresholds = json::object();
                for (const auto& arg : threshold_args) {
                    const auto eq = arg.find('=');
                    if (eq == std::string::npos) {
                        std::cerr << "srcmetry: --threshold expects LANG=N, got '" << arg << "'\n";
                        return 1;
                    }
                    thresholds[arg.substr(0, eq)] = std::stoi(arg.substr(eq + 1));
                }
                options["thresholds"] = thresholds;
            }
        } else {
            options["min_tokens"] = min_tokens;
            options["stride"] = stride;
            options["similarity"] = similarity;
        }
        char* raw_out = nullptr;
        if (sm_corpus_clones(corpus.get(), options.dump().c_str(), &raw_out) != SM_OK) {
            die("clones");
        }
        ApiString out(raw_out);
        write_output(out.get(), output);
        return 0;
    }

    if (triage->parsed()) {
        const auto clones_text = read_file(clones_path);
        json options = {{"threshold", triage_threshold}, {"identifier_rule", identifier_rule}};
        if (!labels_path.empty()) options["labels"] = json::parse(read_file(labels_path));
        char* raw_out = nullptr;
        if (sm_triage(clones_text.c_str(), options.dump().c_str(), &raw_out) != SM_OK) {
            die("triage");
        }
        ApiString out(raw_out);
        write_output(out.get(), output);
        return 0;
    }

    if (trends->parsed()) {
        char* raw_out = nullptr;
        if (!series_path.empty()) {
            const auto series = read_file(series_path);
            const auto status = fit_kind == "exp" ? sm_exp_fit_json(series.c_str(), &raw_out)
                                                  : sm_linear_fit_json(series.c_str(), &raw_out);
            if (status != SM_OK) die("trends");
        } else {
            const auto corpus = load_corpus(require_manifest(global, manifest), global.jobs);
            const json options = {{"cocomo_class", cocomo_class},
                                  {"aggregate_years", aggregate_years},
                                  {"jobs", global.jobs}};
            if (sm_corpus_trends_json(corpus.get(), options.dump().c_str(), &raw_out) != SM_OK) {
                die("trends");
            }
        }
        ApiString out(raw_out);
        write_output(out.get(), output);
        return 0;
    }

    if (compare->parsed()) {
        const auto a = read_file(report_a);
        const auto b = read_file(report_b);
        const json options = {{"cocomo_class", cocomo_class}};
        char* raw_out = nullptr;
        if (sm_compare(a.c_str(), b.c_str(), options.dump().c_str(), &raw_out) != SM_OK) {
            die("compare");
        }
        ApiString out(raw_out);
        write_output(out.get(), output);
        return 0;
    }

    if (report->parsed()) {
        json config = global.config;
        // explicit flags override config-file values; untouched flags only
        // fill gaps
        const auto set_if = [&](const char* key, const std::string& flag, const json& value) {
            if (report->get_option(flag)->count() > 0 || !config.contains(key)) {
                config[key] = value;
            }
        };
        if (!manifest.empty()) config["manifest"] = manifest;
        if (!output_dir.empty()) config["output_dir"] = output_dir;
        if (!stages.empty()) config["stages"] = stages;
        if (report->get_option("--engine")->count() > 0) {
            config["clone_engine"] = engine;
        } else if (!config.contains("clone_engine")) {
            config["clone_engine"] = "both";
        }
        set_if("raw_clones", "--raw", raw);
        set_if("cocomo_class", "--cocomo-class", cocomo_class);
        set_if("min_tokens", "--min-tokens", min_tokens);
        set_if("stride", "--stride", stride);
        set_if("similarity", "--similarity", similarity);
        set_if("triage_threshold", "--triage-threshold", triage_threshold);
        set_if("aggregate_years", "--aggregate-years", aggregate_years);
        set_if("svg", "--svg", svg);
        config["jobs"] = global.jobs;
        config["seed"] = global.seed;
        if (!config.contains("manifest") || !config.contains("output_dir")) {
            std::cerr << "srcmetry: report needs --manifest and --output-dir (or --config)\n";
            return 1;
        }
        char* raw_out = nullptr;
        const auto status = sm_run(config.dump().c_str(), ".", &raw_out);
        ApiString out(raw_out);
        if (out) std::cout << out.get();
        if (status != SM_OK) {
            std::cerr << "srcmetry: report: " << sm_last_error() << "\n";
            return 1;
        }
        return 0;
    }

    return 0;
}
