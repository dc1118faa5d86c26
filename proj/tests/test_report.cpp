// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "srcmetry/report.hpp"
#include "support/fixtures.hpp"

using namespace srcmetry;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// three synthetic samples: C botnet, assembly virus, mixed-language RAT
fs::path build_fixture_corpus(const test::TempDir& dir) {
    dir.write("botnet/bot.c",
              "#include <stdio.h>\n"
              "int beacon(int n) {\n"
              "  if (n > 0 && n < 100) { return n; }\n"
              "  return 0;\n"
              "}\n"
              "/* carrier loop */\n"
              "int main(void) {\n"
              "  int i;\n"
              "  for (i = 0; i < 10; i++) { beacon(i); }\n"
              "  return 0;\n"
              "}\n");
    dir.write("botnet/util.c", "int add(int a, int b) { return a + b; }\n");
    dir.write("virus/boot.asm",
              "; entry\n"
              "mov ax, 0x13\n"
              "int 0x10\n"
              "\n"
              "jmp start\n");
    dir.write("rat/client.cpp",
              "int connect_back(const char* host) {\n"
              "  while (host) { return 1; }\n"
              "  return 0;\n"
              "}\n");
    dir.write("rat/panel.php",
              "<?php\n"
              "// panel\n"
              "echo \"hi\";\n"
              "?>\n");
    return test::write_manifest(
        dir, {{"botnet", 2007, "B"}, {"virus", 1994, "V"}, {"rat", 2014, "R"}});
}

}  // namespace

TEST_CASE("sample reports carry tallies, FP, COCOMO, and quality") {
    test::TempDir dir("report-build");
    const auto manifest = build_fixture_corpus(dir);
    const auto corpus = corpus::load(manifest);
    const auto reports = report::build_sample_reports(
        corpus, sizing::BackfireTable::defaults(),
        cocomo::Coefficients::defaults(cocomo::ProjectClass::Organic));
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].id == "botnet");
    CHECK(reports[0].per_language.contains(Language::C));
    CHECK(reports[0].total.sloc > 0);
    CHECK(reports[0].function_points > 0.0);
    REQUIRE(reports[0].cost.has_value());
    REQUIRE(reports[0].quality.has_value());
    CHECK(reports[0].quality->per_function_cc.size() == 3);  // beacon, main, add

    // assembly-only sample has no quality report (manifest order: botnet, virus, rat)
    const auto& virus = reports[1];
    CHECK(virus.id == "virus");
    CHECK(!virus.quality.has_value());
    CHECK(virus.per_language.contains(Language::Assembly));

    // round-trip through report.json preserves the numbers
    const auto text = report::sample_reports_to_json(reports);
    const auto loaded = report::sample_reports_from_json(text);
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[0].total.sloc == reports[0].total.sloc);
    CHECK(loaded[0].function_points == doctest::Approx(reports[0].function_points));
    REQUIRE(loaded[0].cost.has_value());
    CHECK(loaded[0].cost->effort_man_months ==
          doctest::Approx(reports[0].cost->effort_man_months));
    REQUIRE(loaded[0].quality.has_value());
    CHECK(loaded[0].quality->per_function_cc.size() ==
          reports[0].quality->per_function_cc.size());
}

TEST_CASE("run writes the full artifact set for the fixture corpus") {
    test::TempDir dir("report-run");
    const auto manifest = build_fixture_corpus(dir);
    report::RunConfig config;
    config.manifest = manifest;
    config.output_dir = dir.path() / "out";
    config.ast_params.min_tokens = 10;
    const auto result = report::run(config);
    CHECK(result.exit_code == 0);
    CHECK(result.errors.empty());
    for (const auto* name :
         {"samples.csv", "report.json", "clones.jsonl", "ast_clusters.json", "clusters.json",
          "trends.json", "plot_sloc_by_year.tsv", "plot_cc_hist.tsv"}) {
        CHECK(fs::exists(config.output_dir / name));
    }
    CHECK(!fs::exists(config.output_dir / "FAILED"));

    const auto csv = slurp(config.output_dir / "samples.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 samples
    CHECK(csv.rfind("id,year,category,files,languages,sloc,fp,E,D,P,avg_cc,mi,comment_ratio\n",
                    0) == 0);
}

TEST_CASE("stage gating: metrics only emits no clone artifacts") {
    test::TempDir dir("report-stages");
    const auto manifest = build_fixture_corpus(dir);
    report::RunConfig config;
    config.manifest = manifest;
    config.output_dir = dir.path() / "out";
    config.stages = {"metrics"};
    const auto result = report::run(config);
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(config.output_dir / "samples.csv"));
    CHECK(!fs::exists(config.output_dir / "clones.jsonl"));
    CHECK(!fs::exists(config.output_dir / "clusters.json"));
    CHECK(!fs::exists(config.output_dir / "trends.json"));
}

TEST_CASE("reruns produce byte-identical artifacts") {
    test::TempDir dir("report-determinism");
    const auto manifest = build_fixture_corpus(dir);
    report::RunConfig config;
    config.manifest = manifest;
    config.output_dir = dir.path() / "out1";
    config.ast_params.min_tokens = 10;
    config.jobs = 8;
    const auto first = report::run(config);
    config.output_dir = dir.path() / "out2";
    const auto second = report::run(config);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    REQUIRE(first.artifacts == second.artifacts);
    for (const auto& name : first.artifacts) {
        CHECK(slurp(dir.path() / "out1" / name) == slurp(dir.path() / "out2" / name));
    }
}

TEST_CASE("an empty corpus still completes with header-only artifacts") {
    test::TempDir dir("report-empty");
    dir.write("m.json", "[]");
    report::RunConfig config;
    config.manifest = dir.path() / "m.json";
    config.output_dir = dir.path() / "out";
    const auto result = report::run(config);
    CHECK(result.exit_code == 0);
    const auto csv = slurp(config.output_dir / "samples.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
    const auto trends_text = slurp(config.output_dir / "trends.json");
    CHECK(trends_text.find("error") != std::string::npos);  // fits degenerate, reported as such
}

TEST_CASE("a missing manifest fails the run and leaves a marker") {
    test::TempDir dir("report-fail");
    report::RunConfig config;
    config.manifest = dir.path() / "missing.json";
    config.output_dir = dir.path() / "out";
    const auto result = report::run(config);
    CHECK(result.exit_code == 1);
    REQUIRE(!result.errors.empty());
    CHECK(fs::exists(config.output_dir / "FAILED"));
}

TEST_CASE("compare recomputes COCOMO columns and tests CC distributions") {
    // a Snort-sized benign fixture: 46,526 C SLOC
    report::SampleReport snort;
    snort.id = "benign";
    snort.year = 2016;
    snort.total = {46526, 4800, 900, 52226};
    snort.per_language[Language::C] = snort.total;
    structure::QualityReport q;
    for (int i = 0; i < 40; ++i) {
        q.per_function_cc.push_back({structure::FunctionSpan{}, 1 + (i % 8)});
    }
    q.avg_cc = 4.5;
    q.avg_halstead_volume = 900.0;
    q.avg_sloc_per_module = 300.0;
    snort.quality = q;

    report::SampleReport mal = snort;
    mal.id = "mal";

    const auto result = report::compare(
        {mal}, {snort}, sizing::BackfireTable::defaults(),
        cocomo::Coefficients::defaults(cocomo::ProjectClass::Organic));
    REQUIRE(result.rows.size() == 2);
    const auto& row = result.rows[1];  // set b, id "benign"
    CHECK(row.set_name == "b");
    REQUIRE(row.metrics.effort.has_value());
    CHECK(*row.metrics.effort == doctest::Approx(135.30).epsilon(0.001));
    CHECK(*row.metrics.duration == doctest::Approx(16.14).epsilon(0.001));
    CHECK(*row.metrics.people == doctest::Approx(8.38).epsilon(0.001));
    REQUIRE(row.metrics.fp.has_value());
    CHECK(*row.metrics.fp == doctest::Approx(46526.0 / 97.0));

    // identical CC distributions: D = 0
    REQUIRE(result.cc_ks.has_value());
    CHECK(result.cc_ks->d_statistic == doctest::Approx(0.0));
    CHECK(result.cc_ks->p_value == doctest::Approx(1.0));

    const auto json_text = report::compare_to_json(result);
    CHECK(json_text.find("\"cc_ks\"") != std::string::npos);
}

TEST_CASE("compare detects disjoint CC distributions") {
    report::SampleReport low, high;
    low.id = "low";
    low.total = {100, 0, 0, 100};
    low.per_language[Language::C] = low.total;
    high = low;
    high.id = "high";
    structure::QualityReport ql, qh;
    for (int i = 0; i < 60; ++i) {
        ql.per_function_cc.push_back({structure::FunctionSpan{}, 1 + (i % 2)});
        qh.per_function_cc.push_back({structure::FunctionSpan{}, 15 + (i % 3)});
    }
    low.quality = ql;
    high.quality = qh;
    const auto result = report::compare(
        {low}, {high}, sizing::BackfireTable::defaults(),
        cocomo::Coefficients::defaults(cocomo::ProjectClass::Organic));
    REQUIRE(result.cc_ks.has_value());
    CHECK(result.cc_ks->d_statistic == doctest::Approx(1.0));
    CHECK(result.cc_ks->p_value < 0.05);
}

TEST_CASE("table dir environment override changes the backfire table") {
    test::TempDir dir("tabledir");
    dir.write("backfire.json", R"({"C": 10.0})");
    setenv("SRCMETRY_TABLE_DIR", dir.path().c_str(), 1);
    const auto table = report::resolve_backfire_table();
    unsetenv("SRCMETRY_TABLE_DIR");
    CHECK(table.ratios.at(Language::C) == 10.0);
    CHECK(report::resolve_backfire_table().ratios.at(Language::C) == 97.0);
}

TEST_CASE("run configs parse from json with path resolution") {
    test::TempDir dir("config");
    dir.write("config.json", R"({
      "manifest": "m.json",
      "output_dir": "out",
      "cocomo_class": "embedded",
      "stages": ["metrics", "trends"],
      "clone_engine": "diff",
      "min_tokens": 50,
      "triage_threshold": 85,
      "jobs": 4
    })");
    const auto config = report::RunConfig::from_json_file(dir.path() / "config.json");
    CHECK(config.manifest == dir.path() / "m.json");
    CHECK(config.output_dir == dir.path() / "out");
    CHECK(config.cocomo_class == cocomo::ProjectClass::Embedded);
    CHECK(config.stages == std::set<std::string>{"metrics", "trends"});
    CHECK(config.ast_params.min_tokens == 50);
    CHECK(config.triage_threshold == 85);
    CHECK(config.jobs == 4);

    dir.write("bad.json", R"({"output_dir": "out"})");
    CHECK_THROWS_AS(report::RunConfig::from_json_file(dir.path() / "bad.json"), Error);
    dir.write("bad2.json", R"({"manifest": "m", "output_dir": "o", "stages": ["nope"]})");
    CHECK_THROWS_AS(report::RunConfig::from_json_file(dir.path() / "bad2.json"), Error);
}
