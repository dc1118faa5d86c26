// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <random>

#include "srcmetry/clonetriage.hpp"
#include "srcmetry/types.hpp"

using namespace srcmetry;
using clonetriage::CanonicalizeOptions;
using clonetriage::CloneDigest;

namespace {

std::string random_text(std::mt19937& rng, std::size_t bytes) {
    std::uniform_int_distribution<int> byte(32, 126);
    std::string out;
    out.reserve(bytes);
    for (std::size_t i = 0; i < bytes; ++i) out += static_cast<char>(byte(rng));
    return out;
}

// code-shaped lines so canonicalization has something realistic to chew on
std::string random_code(std::mt19937& rng, int lines) {
    std::uniform_int_distribution<int> value(0, 0xffffff);
    std::uniform_int_distribution<int> shape(0, 3);
    static const char* names[] = {"send_beacon", "unpack_blob", "spin_lock", "proc_scan",
                                  "key_sched",   "fill_table",  "walk_dirs", "mix_state"};
    std::uniform_int_distribution<std::size_t> name(0, std::size(names) - 1);
    std::string out;
    for (int i = 0; i < lines; ++i) {
        switch (shape(rng)) {
            case 0:
                out += fmt::format("{}({});\n", names[name(rng)], value(rng));
                break;
            case 1:
                out += fmt::format("{} = {} ^ 0x{:x};\n", names[name(rng)], names[name(rng)],
                                   value(rng));
                break;
            case 2:
                out += fmt::format("if ({} > {}) goto out_{};\n", names[name(rng)], value(rng), i);
                break;
            default:
                out += fmt::format("buf[{}] = \"{:x}\";\n", i, value(rng));
                break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("canonicalization applies the ordered rules") {
    SUBCASE("numbers and single-char identifiers") {
        // the identifier rule only touches identifiers longer than one char
        CHECK(clonetriage::canonicalize("x=0x41;", {.identifier_rule = true}) == "x=#N;");
        CHECK(clonetriage::canonicalize("x=0x41;", {.identifier_rule = false}) == "x=#N;");
    }
    SUBCASE("multi-char identifiers collapse under the flag") {
        CHECK(clonetriage::canonicalize("total=0x41;", {.identifier_rule = true}) == "#ID=#N;");
        CHECK(clonetriage::canonicalize("total=0x41;", {.identifier_rule = false}) ==
              "total=#N;");
    }
    SUBCASE("empty input stays empty") {
        CHECK(clonetriage::canonicalize("").empty());
    }
    SUBCASE("strings become #S and whitespace collapses") {
        CHECK(clonetriage::canonicalize("call(\"x\\\"y\",  'c')   ;") == "call(#S, #S) ;");
    }
    SUBCASE("clones differing only in an IP string canonicalize identically") {
        const auto a = clonetriage::canonicalize("connect(sock, \"192.168.0.1\", 8080);");
        const auto b = clonetriage::canonicalize("connect(sock, \"10.77.4.250\", 443);");
        CHECK(a == b);
        CHECK(a == "connect(sock, #S, #N);");
    }
    SUBCASE("decimal, float, and suffixed literals all map to #N") {
        CHECK(clonetriage::canonicalize("a = 100; b = 3.25; c = 12UL;") ==
              "a = #N; b = #N; c = #N;");
    }
}

TEST_CASE("canonicalization is idempotent") {
    std::mt19937 rng(17);
    for (int round = 0; round < 100; ++round) {
        const auto text = random_code(rng, 12);
        for (const bool rule : {false, true}) {
            CanonicalizeOptions opts{.identifier_rule = rule};
            const auto once = clonetriage::canonicalize(text, opts);
            CHECK(clonetriage::canonicalize(once, opts) == once);
        }
    }
}

TEST_CASE("ctph digests are deterministic and well-formed") {
    std::mt19937 rng(23);
    const auto text = random_text(rng, 2048);
    const auto d1 = clonetriage::ctph(text);
    const auto d2 = clonetriage::ctph(text);
    CHECK(d1 == d2);
    CHECK(std::count(d1.begin(), d1.end(), ':') == 2);
    // block size prefix scales the signature to at most 64 chars
    const auto first_colon = d1.find(':');
    const auto second_colon = d1.find(':', first_colon + 1);
    CHECK(second_colon - first_colon - 1 <= 64);
}

TEST_CASE("similarity is symmetric with self-similarity 100") {
    std::mt19937 rng(29);
    for (int round = 0; round < 20; ++round) {
        const auto a = clonetriage::ctph(random_text(rng, 1024));
        const auto b = clonetriage::ctph(random_text(rng, 1024));
        CHECK(clonetriage::similarity(a, a) == 100);
        CHECK(clonetriage::similarity(a, b) == clonetriage::similarity(b, a));
    }
}

TEST_CASE("one flipped byte in 4 KiB keeps similarity at 90 or above") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<std::size_t> pos(0, 4095);
    for (int round = 0; round < 10; ++round) {
        auto original = random_text(rng, 4096);
        auto mutated = original;
        const auto at = pos(rng);
        mutated[at] = mutated[at] == 'Q' ? 'q' : 'Q';
        const auto score =
            clonetriage::similarity(clonetriage::ctph(original), clonetriage::ctph(mutated));
        CHECK(score >= 90);
    }
}

TEST_CASE("unrelated 4 KiB inputs score 10 or below") {
    std::mt19937 rng(37);
    for (int round = 0; round < 10; ++round) {
        const auto a = clonetriage::ctph(random_text(rng, 4096));
        const auto b = clonetriage::ctph(random_text(rng, 4096));
        CHECK(clonetriage::similarity(a, b) <= 10);
    }
}

TEST_CASE("malformed digests are rejected") {
    CHECK_THROWS_AS(clonetriage::similarity("nonsense", "3:ab:cd"), Error);
    CHECK_THROWS_AS(clonetriage::similarity("0:x:y", "3:ab:cd"), Error);
}

TEST_CASE("grouping clusters near-identical digests") {
    SUBCASE("identical digests form one cluster") {
        std::vector<CloneDigest> digests;
        for (int i = 0; i < 5; ++i) {
            digests.push_back(clonetriage::digest("clone-" + std::to_string(i), "same body"));
        }
        const auto clusters = clonetriage::group(digests, 90);
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].members.size() == 5);
        CHECK(std::is_sorted(clusters[0].members.begin(), clusters[0].members.end()));
    }
    SUBCASE("an out-of-range threshold clamps to 100 and keeps exact matches only") {
        std::mt19937 rng(41);
        const auto base = random_text(rng, 512);
        auto tweaked = base;
        tweaked[100] = tweaked[100] == 'a' ? 'b' : 'a';
        const std::vector<CloneDigest> digests = {
            clonetriage::digest("c1", base),
            clonetriage::digest("c2", base),
            clonetriage::digest("c3", tweaked),
        };
        const auto clusters = clonetriage::group(digests, 101);
        REQUIRE(clusters.size() == 2);
        CHECK(clusters[0].members == std::vector<std::string>{"c1", "c2"});
        CHECK(clusters[1].members == std::vector<std::string>{"c3"});
    }
}

TEST_CASE("ten mutation families group into about ten clusters") {
    std::mt19937 rng(43);
    std::vector<CloneDigest> digests;
    int next_id = 0;
    for (int family = 0; family < 10; ++family) {
        const auto base = random_code(rng, 60);
        for (int copy = 0; copy < 10; ++copy) {
            auto text = base;
            // the original plus near-copies with a few letters flipped inside
            // identifiers (numbers/strings are canonicalized away anyway)
            std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
            const int edits = copy == 0 ? 0 : 1 + copy % 2;
            for (int edit = 0; edit < edits; ++edit) {
                const auto at = pos(rng);
                if (std::isalpha(static_cast<unsigned char>(text[at]))) {
                    text[at] = text[at] == 'z' ? 'y' : 'z';
                }
            }
            digests.push_back(clonetriage::digest(
                fmt::format("clone-{:03}", next_id++), clonetriage::canonicalize(text)));
        }
    }
    const auto clusters = clonetriage::group(digests, 90);
    CHECK(clusters.size() >= 8);
    CHECK(clusters.size() <= 12);
}

TEST_CASE("grouping is invariant to input order") {
    std::mt19937 rng(47);
    std::vector<CloneDigest> digests;
    for (int family = 0; family < 4; ++family) {
        const auto base = random_code(rng, 40);
        for (int copy = 0; copy < 4; ++copy) {
            auto text = base;
            text += fmt::format("tail_{};\n", copy);
            digests.push_back(clonetriage::digest(
                fmt::format("clone-{:03}", family * 4 + copy), clonetriage::canonicalize(text)));
        }
    }
    auto shuffled = digests;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = clonetriage::group(digests, 85);
    const auto b = clonetriage::group(shuffled, 85);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].members == b[i].members);
}
