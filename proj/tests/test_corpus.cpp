// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <string>

#include "srcmetry/corpus.hpp"
#include "srcmetry/util.hpp"
#include "support/fixtures.hpp"

using namespace srcmetry;
namespace fs = std::filesystem;

namespace {

SampleManifest manifest_for(const test::TempDir& dir, const std::string& id = "s1") {
    SampleManifest m;
    m.id = id;
    m.name = id;
    m.year = 2007;
    m.category = Category::B;
    m.root = dir.path();
    return m;
}

}  // namespace

TEST_CASE("scan of an empty directory yields nothing") {
    test::TempDir dir("scan-empty");
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    CHECK(result.files.empty());
    CHECK(result.skipped.empty());
}

TEST_CASE("scan keeps text sources and records binary skips") {
    test::TempDir dir("scan-mixed");
    dir.write("a.c", "int x;\n");
    dir.write("b.py", "print(1)\n");
    dir.write("c.bin", std::string("\x7f""ELF\0\0\0binary", 13));
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    REQUIRE(result.files.size() == 2);
    CHECK(result.files[0].rel_path == "a.c");
    CHECK(result.files[0].language == Language::C);
    CHECK(result.files[1].rel_path == "b.py");
    CHECK(result.files[1].language == Language::Python);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].rel_path == "c.bin");
    CHECK(result.skipped[0].reason == "binary");
}

TEST_CASE("shebang decides the language of extensionless scripts") {
    test::TempDir dir("scan-shebang");
    dir.write("run", "#!/bin/sh\necho hi\n");
    dir.write("tool", "#!/usr/bin/env python3\nprint(2)\n");
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    REQUIRE(result.files.size() == 2);
    CHECK(result.files[0].rel_path == "run");
    CHECK(result.files[0].language == Language::Shell);
    CHECK(result.files[1].language == Language::Python);
}

TEST_CASE("dot-h attribution follows C++ siblings") {
    test::TempDir c_dir("scan-h-c");
    c_dir.write("main.c", "int main(void){return 0;}\n");
    c_dir.write("defs.h", "#define X 1\n");
    auto result = corpus::scan(c_dir.path(), manifest_for(c_dir));
    REQUIRE(result.files.size() == 2);
    CHECK(result.files[0].language == Language::C);  // defs.h

    test::TempDir cpp_dir("scan-h-cpp");
    cpp_dir.write("main.cpp", "int main(){return 0;}\n");
    cpp_dir.write("defs.h", "#define X 1\n");
    result = corpus::scan(cpp_dir.path(), manifest_for(cpp_dir));
    REQUIRE(result.files.size() == 2);
    CHECK(result.files[0].language == Language::Cpp);
}

TEST_CASE("unknown extensions stay text files with UNKNOWN language") {
    test::TempDir dir("scan-unknown");
    dir.write("notes.txt", "just text\n");
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    REQUIRE(result.files.size() == 1);
    CHECK(result.files[0].language == Language::Unknown);
}

TEST_CASE("hidden directories and symlinks are not scanned") {
    test::TempDir dir("scan-hidden");
    dir.write("x.c", "int x;\n");
    dir.write(".git/blob.c", "int hidden;\n");
    std::error_code ec;
    fs::create_symlink(dir.path() / "x.c", dir.path() / "link.c", ec);
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    REQUIRE(result.files.size() == 1);
    CHECK(result.files[0].rel_path == "x.c");
}

TEST_CASE("scanning is deterministic and digests separate contents") {
    test::TempDir dir("scan-det");
    dir.write("a.c", "int a;\n");
    dir.write("b.c", "int b;\n");
    dir.write("sub/c.c", "int c;\n");
    const auto first = corpus::scan(dir.path(), manifest_for(dir), 4);
    const auto second = corpus::scan(dir.path(), manifest_for(dir), 1);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) {
        CHECK(first.files[i].rel_path == second.files[i].rel_path);
        CHECK(first.files[i].content_digest == second.files[i].content_digest);
    }
    CHECK(first.files[0].content_digest != first.files[1].content_digest);
}

TEST_CASE("legacy encodings decode through the latin-1 fallback") {
    test::TempDir dir("scan-latin1");
    dir.write("old.c", std::string("// caf\xe9\nint x;\n"));
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    REQUIRE(result.files.size() == 1);
    REQUIRE(result.files[0].lines.size() == 2);
    CHECK(result.files[0].lines[1] == "int x;");
}

TEST_CASE("a UTF-8 BOM does not leak into the first line") {
    test::TempDir dir("scan-bom");
    dir.write("bom.c", std::string("\xEF\xBB\xBF// header comment\nint x;\n"));
    dir.write("script", std::string("\xEF\xBB\xBF#!/bin/sh\necho hi\n"));
    const auto result = corpus::scan(dir.path(), manifest_for(dir));
    REQUIRE(result.files.size() == 2);
    CHECK(result.files[0].lines[0] == "// header comment");
    CHECK(result.files[1].language == Language::Shell);
}

TEST_CASE("scan of a missing root is fatal") {
    test::TempDir dir("scan-missing");
    auto m = manifest_for(dir);
    m.root = dir.path() / "nope";
    CHECK_THROWS_AS(corpus::scan(m.root, m), Error);
}

TEST_CASE("manifest loading validates records") {
    test::TempDir dir("manifest");
    dir.write("zeus/bot.c", "int x;\n");

    SUBCASE("valid record is accepted") {
        dir.write("m.json",
                  R"([{"id": "zeus", "name": "Zeus", "year": 2007, "category": "B", "root": "zeus"}])");
        const auto manifests = corpus::load_manifest(dir.path() / "m.json");
        REQUIRE(manifests.size() == 1);
        CHECK(manifests[0].id == "zeus");
        CHECK(manifests[0].year == 2007);
        CHECK(manifests[0].category == Category::B);
        CHECK(manifests[0].root == dir.path() / "zeus");
    }

    SUBCASE("invalid category names the field") {
        dir.write("m.json", R"([{"id": "a", "year": 2000, "category": "X", "root": "zeus"}])");
        try {
            corpus::load_manifest(dir.path() / "m.json");
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("category") != std::string::npos);
        }
    }

    SUBCASE("duplicate ids are fatal") {
        dir.write("m.json",
                  R"([{"id": "zeus", "year": 2007, "category": "B", "root": "zeus"},
                      {"id": "zeus", "year": 2008, "category": "B", "root": "zeus"}])");
        try {
            corpus::load_manifest(dir.path() / "m.json");
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        }
    }

    SUBCASE("year outside the declared range is fatal") {
        dir.write("m.json", R"([{"id": "a", "year": 1950, "category": "V", "root": "zeus"}])");
        CHECK_THROWS_AS(corpus::load_manifest(dir.path() / "m.json"), Error);
    }
}

TEST_CASE("corpus load scans every sample and sorts files") {
    test::TempDir dir("load");
    dir.write("s1/a.c", "int a;\n");
    dir.write("s2/b.c", "int b;\n");
    const auto manifest =
        test::write_manifest(dir, {{"s1", 2000, "V"}, {"s2", 2001, "W"}});
    const auto corpus = corpus::load(manifest, 2);
    REQUIRE(corpus.samples.size() == 2);
    REQUIRE(corpus.files.size() == 2);
    CHECK(corpus.files[0].sample_id == "s1");
    CHECK(corpus.files[1].sample_id == "s2");
    CHECK(corpus.files_of("s1").size() == 1);
}
