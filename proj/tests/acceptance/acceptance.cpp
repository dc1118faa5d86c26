// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line and
// the binary exits nonzero if any of them fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "srcmetry/cloneast.hpp"
#include "srcmetry/clonediff.hpp"
#include "srcmetry/clonetriage.hpp"
#include "srcmetry/cocomo.hpp"
#include "srcmetry/report.hpp"
#include "srcmetry/sizing.hpp"
#include "srcmetry/structure.hpp"
#include "srcmetry/trends.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace srcmetry;

namespace {

int g_failures = 0;

struct Check {
    std::string name;
    double budget_ms;

    void run(const std::function<bool(std::string&)>& body) const {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const auto elapsed =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > budget_ms) {
            ok = false;
            detail += detail.empty() ? "" : "; ";
            detail += "over time budget";
        }
        std::printf("[%s] %s (%.0f ms)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), elapsed,
                     detail.empty() ? "" : " - ", detail.c_str());
        if (!ok) ++g_failures;
    }
};

bool near(double value, double expected, double tolerance) {
    return std::abs(value - expected) <= tolerance;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// -- criterion bodies ---------------------------------------------------------

bool cocomo_reproduction(std::string& detail) {
    const auto organic = cocomo::Coefficients::defaults(cocomo::ProjectClass::Organic);
    const auto zeus = cocomo::estimate(61.752, organic);
    const auto ghost = cocomo::estimate(33.170, organic);
    const bool ok = near(zeus.effort_man_months, 182.14, 0.5) &&
                    near(zeus.duration_months, 18.07, 0.05) && near(zeus.people, 10.08, 0.05) &&
                    near(ghost.effort_man_months, 94.84, 0.5) &&
                    near(ghost.duration_months, 14.10, 0.05) && near(ghost.people, 6.73, 0.05);
    if (!ok) {
        detail = "E=" + std::to_string(zeus.effort_man_months) +
                 " D=" + std::to_string(zeus.duration_months) +
                 " P=" + std::to_string(zeus.people);
    }
    return ok;
}

bool backfiring(std::string& detail) {
    const auto table = sizing::BackfireTable::defaults();
    const std::map<Language, linecount::LineTally> tallies = {
        {Language::C, {970, 0, 0, 970}},
        {Language::Cpp, {500, 0, 0, 500}},
        {Language::Python, {240, 0, 0, 240}},
    };
    const double fp = sizing::function_points(tallies, table);
    if (std::abs(fp - 30.0) > 1e-9) {
        detail = "fp=" + std::to_string(fp);
        return false;
    }
    return true;
}

bool cyclomatic_oracle(std::string& detail) {
    int mismatches = 0;
    for (std::uint32_t seed = 0; seed < 1000; ++seed) {
        test::ProgGen gen(seed);
        const auto program = gen.program();
        const auto expected = test::CfgOracle().cyclomatic(program);
        const auto source = test::render_function(program, seed);
        const auto file = test::make_source("s", "gen.c", Language::C, source);
        const auto spans = structure::segment_functions(file);
        if (spans.size() != 1 || structure::cyclomatic(spans[0]) != expected) ++mismatches;
    }
    if (mismatches != 0) {
        detail = std::to_string(mismatches) + " of 1000 mismatched";
        return false;
    }
    return true;
}

bool mi_formula(std::string& detail) {
    if (!near(structure::maintainability_index(100.0, 5.0, 100.0), 41.70, 0.01)) {
        detail = "MI(100,5,100) off";
        return false;
    }
    if (structure::maintainability_index(1.0, 0.0, 1.0) != 100.0) {
        detail = "MI(1,0,1) not exactly 100";
        return false;
    }
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> v_dist(1.0, 4000.0);
    std::uniform_real_distribution<double> m_dist(0.0, 25.0);
    std::uniform_real_distribution<double> s_dist(1.0, 1500.0);
    for (int i = 0; i < 500; ++i) {
        const double v = v_dist(rng), m = m_dist(rng), s = s_dist(rng);
        const double base = structure::maintainability_index(v, m, s);
        if (structure::maintainability_index(v * 1.01, m, s) >= base ||
            structure::maintainability_index(v, m + 0.1, s) >= base ||
            structure::maintainability_index(v, m, s * 1.01) >= base) {
            detail = "not monotone decreasing";
            return false;
        }
    }
    return true;
}

bool textual_engine(std::string& detail) {
    const std::vector<std::string> plant = {
        "for (i = 0; i < n; i++) {", "buf[i] = src[i] ^ key;",   "crc = update(crc, buf[i]);",
        "if (crc == magic) {",       "notify(crc, buf, sizeof(buf));", "}",
        "}"};
    std::vector<std::string> mutated;
    for (const auto& line : plant) {
        std::string noisy = "\t ";
        for (const char c : line) {
            noisy += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (c == ',') noisy += ' ';
        }
        mutated.push_back(noisy);
    }
    std::vector<std::string> lines_a = {"alpha_head = 1;"};
    lines_a.insert(lines_a.end(), plant.begin(), plant.end());
    lines_a.push_back("alpha_tail = 2;");
    std::vector<std::string> lines_b = {"beta_head = 3;", "beta_head2 = 4;"};
    lines_b.insert(lines_b.end(), mutated.begin(), mutated.end());
    lines_b.push_back("beta_tail = 5;");

    const auto a = clonediff::normalize(
        test::make_source("s1", "a.c", Language::C, test::join(lines_a)));
    const auto b = clonediff::normalize(
        test::make_source("s2", "b.c", Language::C, test::join(lines_b)));

    const auto at5 = clonediff::detect_pair(a, b, 5);
    if (at5.size() != 1 || at5[0].length_sloc != 7) {
        detail = "C plant: got " + std::to_string(at5.size()) + " matches";
        return false;
    }
    if (!clonediff::detect_pair(a, b, 10).empty()) {
        detail = "C plant matched at threshold 10";
        return false;
    }

    std::vector<std::string> asm_plant;
    for (int i = 0; i < 12; ++i) {
        asm_plant.push_back("xor r" + std::to_string(i) + ", r" + std::to_string(i));
    }
    std::vector<std::string> asm_a = {"jmp head_one"};
    asm_a.insert(asm_a.end(), asm_plant.begin(), asm_plant.end());
    std::vector<std::string> asm_b = {"call head_two", "nop"};
    asm_b.insert(asm_b.end(), asm_plant.begin(), asm_plant.end());
    const auto na = clonediff::normalize(
        test::make_source("s1", "a.asm", Language::Assembly, test::join(asm_a)));
    const auto nb = clonediff::normalize(
        test::make_source("s2", "b.asm", Language::Assembly, test::join(asm_b)));
    const auto asm_matches = clonediff::detect_pair(na, nb, 10);
    if (asm_matches.size() != 1 || asm_matches[0].length_sloc != 12) {
        detail = "assembly plant not detected";
        return false;
    }
    return true;
}

const char* kInfectExes =
    "int InfectExes(void){\n"
    "WIN32_FIND_DATA d32;\n"
    "char MyFile[256];\n"
    "GetFileName(MyFile,sizeof(MyFile));\n";
const char* kInfectFiles =
    "int InfectFiles(void){\n"
    "WIN32_FIND_DATA w32;\n"
    "char FileName[256];\n"
    "GetFileName(FileName,sizeof(FileName));\n";

bool structural_engine(std::string& detail) {
    test::TempDir dir("acc-struct");
    dir.write("s1/infect.c", kInfectExes);
    dir.write("s2/infect.c", kInfectFiles);
    const auto manifest = test::write_manifest(dir, {{"s1", 2002, "V"}, {"s2", 2003, "V"}});
    const auto corpus = corpus::load(manifest);

    cloneast::Params params;
    params.min_tokens = 10;
    params.stride = 2;
    params.similarity = 1.0;
    const auto clusters = cloneast::detect_corpus(corpus, params);
    bool cross_file = false;
    for (const auto& cluster : clusters) {
        bool has_a = false, has_b = false;
        for (const auto& member : cluster.members) {
            if (member.sample_id == "s1") has_a = true;
            if (member.sample_id == "s2") has_b = true;
        }
        if (has_a && has_b) cross_file = true;
    }
    if (!cross_file) {
        detail = "no cross-sample structural cluster";
        return false;
    }

    const auto matches =
        clonediff::detect_corpus(corpus, clonediff::Thresholds::defaults());
    if (!matches.empty()) {
        detail = "textual engine unexpectedly matched renamed fragments";
        return false;
    }
    // stronger form: not even a single normalized line coincides
    const auto na = clonediff::normalize(test::make_source("s1", "a.c", Language::C, kInfectExes));
    const auto nb =
        clonediff::normalize(test::make_source("s2", "b.c", Language::C, kInfectFiles));
    if (!clonediff::detect_pair(na, nb, 1).empty()) {
        detail = "fragments share normalized lines";
        return false;
    }
    return true;
}

bool rename_false_positive(std::string& detail) {
    std::string decl_a = "static unsigned long SP1[16] = {";
    std::string decl_b = "static unsigned char PADDING[16] = {";
    for (int i = 0; i < 16; ++i) {
        decl_a += "0x01010400L,";
        decl_b += "0x80,";
    }
    decl_a += "};";
    decl_b += "};";
    const auto va = cloneast::vectorize(*cloneast::parse_subset(decl_a).root, 1, 2);
    const auto vb = cloneast::vectorize(*cloneast::parse_subset(decl_b).root, 1, 2);
    if (va.empty() || va.size() != vb.size()) {
        detail = "vector counts differ";
        return false;
    }
    for (std::size_t i = 0; i < va.size(); ++i) {
        if (!(va[i].counts == vb[i].counts)) {
            detail = "vector " + std::to_string(i) + " differs";
            return false;
        }
    }
    return true;
}

bool trend_regression(std::string& detail) {
    std::vector<trends::TimeSeriesPoint> points;
    for (int year = 2000; year <= 2020; ++year) {
        points.push_back({year, 100.0 * std::pow(1.14, year - 2000)});
    }
    const auto fit = trends::exp_fit(points);
    if (!near(fit.annual_factor, 1.14, 1e-6)) {
        detail = "annual_factor=" + std::to_string(fit.annual_factor);
        return false;
    }
    if (!fit.doubling_years || !near(*fit.doubling_years, 5.29, 0.01)) {
        detail = "doubling_years off";
        return false;
    }
    return true;
}

bool ks_chi_square(std::string& detail) {
    const std::vector<double> sample = {1, 2, 2, 3, 3, 3, 4, 5, 6, 9};
    const auto same = trends::ks_two_sample(sample, sample);
    if (same.d_statistic != 0.0 || !near(same.p_value, 1.0, 1e-12)) {
        detail = "identical samples: D or p off";
        return false;
    }

    // discrete 50+50 samples; wide support keeps ties mild, where the
    // continuity-based asymptotic p is meaningful
    std::mt19937 rng(321);
    std::uniform_int_distribution<int> value(1, 100);
    for (int round = 0; round < 3; ++round) {
        std::vector<double> a, b;
        for (int i = 0; i < 50; ++i) a.push_back(static_cast<double>(value(rng)));
        for (int i = 0; i < 50; ++i) b.push_back(static_cast<double>(value(rng)));
        const double asymptotic = trends::ks_two_sample(a, b).p_value;
        const double oracle = test::permutation_ks_p(a, b, 10000, 777 + round);
        if (std::abs(asymptotic - oracle) > 0.05) {
            detail = "permutation disagreement " + std::to_string(asymptotic) + " vs " +
                     std::to_string(oracle);
            return false;
        }
    }

    std::discrete_distribution<int> skewed({0, 6, 14, 18, 15, 11, 8, 6, 4, 3, 2, 1, 1});
    int non_rejections = 0;
    for (int trial = 0; trial < 100; ++trial) {
        trends::Histogram a, b;
        for (int e = 1; e <= 13; ++e) a.edges.push_back(e);
        b.edges = a.edges;
        a.counts.assign(12, 0.0);
        b.counts.assign(12, 0.0);
        for (int i = 0; i < 300; ++i) {
            a.counts[static_cast<std::size_t>(std::max(1, skewed(rng)) - 1)] += 1.0;
            b.counts[static_cast<std::size_t>(std::max(1, skewed(rng)) - 1)] += 1.0;
        }
        if (trends::chi_square_hist(a, b).p_value >= 0.05) ++non_rejections;
    }
    if (non_rejections < 90) {
        detail = "only " + std::to_string(non_rejections) + "/100 non-rejections";
        return false;
    }
    return true;
}

bool triage_compression(std::string& detail) {
    std::mt19937 rng(808);
    std::uniform_int_distribution<int> value(0, 0xffffff);
    static const char* verbs[] = {"send", "recv", "pack", "scan", "walk", "mix", "mask", "sync"};
    std::uniform_int_distribution<std::size_t> verb(0, std::size(verbs) - 1);

    std::vector<clonetriage::CloneDigest> digests;
    int id = 0;
    for (int family = 0; family < 10; ++family) {
        std::string base;
        for (int line = 0; line < 50; ++line) {
            base += std::string(verbs[verb(rng)]) + "_" + std::string(verbs[verb(rng)]) + "(" +
                    std::to_string(value(rng)) + ", buf_" + std::to_string(line) + ");\n";
        }
        for (int copy = 0; copy < 10; ++copy) {
            auto text = base;
            // near-copies: the original plus variants with a few byte edits
            std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
            const int edits = copy == 0 ? 0 : 1 + copy % 3;
            for (int edit = 0; edit < edits; ++edit) {
                const auto at = pos(rng);
                if (text[at] != '\n') text[at] = text[at] == 'a' ? 'e' : 'a';
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "clone-%03d", id++);
            digests.push_back(
                clonetriage::digest(buf, clonetriage::canonicalize(text)));
        }
    }
    const auto clusters = clonetriage::group(digests, 90);
    if (clusters.size() < 8 || clusters.size() > 12) {
        detail = std::to_string(clusters.size()) + " clusters";
        return false;
    }
    return true;
}

bool determinism(std::string& detail) {
    test::TempDir dir("acc-det");
    // a small but multi-language fixture corpus
    dir.write("botnet/bot.c",
              "#include <stdio.h>\n"
              "int beacon(int n) {\n"
              "  if (n > 0 && n < 100) { return n; }\n"
              "  return 0;\n"
              "}\n"
              "int main(void) {\n"
              "  for (int i = 0; i < 10; i++) { beacon(i); }\n"
              "  return 0;\n"
              "}\n");
    dir.write("botnet/shared.c",
              "int key_sched(int k) {\n"
              "  while (k > 7) { k = k - 7; }\n"
              "  return k;\n"
              "}\n");
    dir.write("worm/shared.c",
              "int key_sched(int k) {\n"
              "  while (k > 7) { k = k - 7; }\n"
              "  return k;\n"
              "}\n");
    dir.write("worm/spread.py", "def spread(hosts):\n    return [h for h in hosts if h]\n");
    dir.write("virus/boot.asm", "; boot\nmov ax, 0x13\nint 0x10\n");
    const auto manifest = test::write_manifest(
        dir, {{"botnet", 2007, "B"}, {"worm", 2004, "W"}, {"virus", 1994, "V"}});

    report::RunConfig config;
    config.manifest = manifest;
    config.ast_params.min_tokens = 10;
    config.jobs = 8;
    config.output_dir = dir.path() / "out1";
    const auto first = report::run(config);
    config.output_dir = dir.path() / "out2";
    const auto second = report::run(config);
    if (first.exit_code != 0 || second.exit_code != 0) {
        detail = "pipeline failed";
        return false;
    }
    if (first.artifacts != second.artifacts || first.artifacts.empty()) {
        detail = "artifact lists differ";
        return false;
    }
    for (const auto& name : first.artifacts) {
        if (slurp(dir.path() / "out1" / name) != slurp(dir.path() / "out2" / name)) {
            detail = name + " differs between runs";
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    Check{"criterion 1: COCOMO reproduction (Organic reference rows)", 1000}.run(
        cocomo_reproduction);
    Check{"criterion 2: backfiring 970C + 500C++ + 240Py = 30 FP", 1000}.run(backfiring);
    Check{"criterion 3: decision-count CC == E - N + 2P on 1000 random programs", 10000}.run(
        cyclomatic_oracle);
    Check{"criterion 4: MI formula values and monotonicity", 1000}.run(mi_formula);
    Check{"criterion 5: textual clone plants at thresholds 5/10", 1000}.run(textual_engine);
    Check{"criterion 6: renamed fragments cluster structurally, not textually", 1000}.run(
        structural_engine);
    Check{"criterion 7: value/type changes keep characteristic vectors equal", 1000}.run(
        rename_false_positive);
    Check{"criterion 8: planted 1.14 growth factor recovered", 1000}.run(trend_regression);
    Check{"criterion 9: KS/chi-square against permutation and Monte-Carlo oracles", 30000}.run(
        ks_chi_square);
    Check{"criterion 10: 100 clones in 10 families triage to 10 +/- 2 clusters", 5000}.run(
        triage_compression);
    Check{"criterion 11: jobs=8 pipeline reruns byte-identical", 60000}.run(determinism);

    if (g_failures != 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
