// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "srcmetry/util.hpp"

namespace fs = std::filesystem;

namespace srcmetry::corpus {

namespace {

// Extension table. `.h` is handled separately (C/C++ ambiguous).
Language language_from_extension(const std::string& ext) {
    static const std::pair<std::string_view, Language> table[] = {
        {".c", Language::C},
        {".cc", Language::Cpp},    {".cpp", Language::Cpp},
        {".cxx", Language::Cpp},   {".hpp", Language::Cpp},
        {".asm", Language::Assembly}, {".s", Language::Assembly},
        {".py", Language::Python},
        {".js", Language::JavaScript},
        {".php", Language::Php},
        {".pas", Language::Pascal},
        {".cs", Language::CSharp},
        {".java", Language::Java},
        {".vb", Language::VisualBasic}, {".bas", Language::VisualBasic},
        {".frm", Language::VisualBasic},
        {".sql", Language::Sql},
        {".sh", Language::Shell},
        {".bat", Language::Batch},
        {".html", Language::Html}, {".htm", Language::Html},
        {".css", Language::Css},
        {".xml", Language::Xml},
        {".asp", Language::Asp},   {".aspx", Language::Asp},
    };
    for (const auto& [key, value] : table) {
        if (key == ext) return value;
    }
    return Language::Unknown;
}

bool is_cpp_extension(const std::string& ext) {
    return ext == ".cc" || ext == ".cpp" || ext == ".cxx" || ext == ".hpp";
}

std::string lower_extension(const fs::path& p) {
    return util::to_lower(p.extension().string());
}

bool hidden_name(const fs::path& name) {
    const auto s = name.string();
    return s.size() > 1 && s[0] == '.';
}

}  // namespace

Language language_from_path(const fs::path& rel_path, bool sibling_cpp) {
    const auto filename = rel_path.filename().string();
    if (filename == "Makefile" || filename == "makefile") return Language::Make;
    const auto ext = lower_extension(rel_path);
    if (ext == ".h") return sibling_cpp ? Language::Cpp : Language::C;
    return language_from_extension(ext);
}

Language language_from_shebang(std::string_view first_line) {
    if (first_line.size() < 3 || first_line[0] != '#' || first_line[1] != '!') {
        return Language::Unknown;
    }
    std::istringstream iss{std::string(first_line.substr(2))};
    std::string interp;
    iss >> interp;
    auto base = fs::path(interp).filename().string();
    if (base == "env") iss >> base;
    base = fs::path(base).filename().string();
    // Strip a trailing version suffix, e.g. python3.11.
    const auto cut = base.find_first_of("0123456789.");
    const auto stem = cut == std::string::npos ? base : base.substr(0, cut);
    if (stem == "sh" || stem == "bash" || stem == "dash" || stem == "ksh" || stem == "zsh") {
        return Language::Shell;
    }
    if (stem == "python") return Language::Python;
    if (stem == "php") return Language::Php;
    if (stem == "node" || stem == "nodejs") return Language::JavaScript;
    return Language::Unknown;
}

ScanResult scan(const fs::path& root, const SampleManifest& manifest, unsigned jobs) {
    std::error_code ec;
    if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
        throw Error(ErrorCode::io,
                    fmt::format("sample '{}': root '{}' is not a readable directory",
                                manifest.id, root.string()));
    }

    std::vector<fs::path> regular_files;
    std::vector<fs::path> pending{root};
    while (!pending.empty()) {
        const fs::path dir = pending.back();
        pending.pop_back();
        for (fs::directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec), end;
             it != end; it.increment(ec)) {
            if (ec) break;
            const auto& entry = *it;
            if (entry.is_symlink(ec)) continue;
            if (entry.is_directory(ec)) {
                if (!hidden_name(entry.path().filename())) pending.push_back(entry.path());
            } else if (entry.is_regular_file(ec)) {
                if (!hidden_name(entry.path().filename())) regular_files.push_back(entry.path());
            }
        }
    }
    std::sort(regular_files.begin(), regular_files.end());

    // First pass decides `.h` attribution: C++ wins when the sample has any
    // C++-mapped sibling.
    bool sibling_cpp = false;
    for (const auto& p : regular_files) {
        if (is_cpp_extension(lower_extension(p))) {
            sibling_cpp = true;
            break;
        }
    }

    ScanResult result;
    result.files.resize(regular_files.size());
    std::vector<char> keep(regular_files.size(), 0);
    std::mutex skip_mutex;

    util::parallel_for(regular_files.size(), jobs, [&](std::size_t i) {
        const auto& abs_path = regular_files[i];
        const auto rel = fs::relative(abs_path, root);

        std::ifstream in(abs_path, std::ios::binary);
        if (!in) {
            std::lock_guard lock(skip_mutex);
            result.skipped.push_back({manifest.id, rel, "unreadable"});
            return;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string bytes = buf.str();

        if (util::looks_binary(bytes)) {
            std::lock_guard lock(skip_mutex);
            result.skipped.push_back({manifest.id, rel, "binary"});
            return;
        }

        SourceFile file;
        file.sample_id = manifest.id;
        file.rel_path = rel;
        file.byte_size = bytes.size();
        file.content_digest = util::sha256(bytes);
        file.lines = util::split_lines(util::decode_text(bytes));
        file.language = language_from_path(rel, sibling_cpp);
        if (file.language == Language::Unknown && !file.lines.empty()) {
            file.language = language_from_shebang(file.lines.front());
        }
        result.files[i] = std::move(file);
        keep[i] = 1;
    });

    std::vector<SourceFile> kept;
    kept.reserve(regular_files.size());
    for (std::size_t i = 0; i < regular_files.size(); ++i) {
        if (keep[i]) kept.push_back(std::move(result.files[i]));
    }
    result.files = std::move(kept);
    std::sort(result.files.begin(), result.files.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.rel_path < b.rel_path; });
    std::sort(result.skipped.begin(), result.skipped.end(),
              [](const SkipRecord& a, const SkipRecord& b) { return a.rel_path < b.rel_path; });
    return result;
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                    std::size_t index) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::parse, fmt::format("manifest[{}].{}: missing field", index, key));
    }
    return *it;
}

}  // namespace

std::vector<SampleManifest> load_manifest(const fs::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error(ErrorCode::io, fmt::format("cannot open manifest '{}'", file.string()));
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse,
                    fmt::format("manifest '{}': invalid JSON: {}", file.string(), e.what()));
    }
    if (!doc.is_array()) {
        throw Error(ErrorCode::parse, "manifest: top-level value must be an array");
    }

    const auto base = file.has_parent_path() ? file.parent_path() : fs::path(".");
    std::vector<SampleManifest> manifests;
    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        if (!entry.is_object()) {
            throw Error(ErrorCode::parse, fmt::format("manifest[{}]: expected an object", i));
        }
        SampleManifest m;
        const auto& id = require_field(entry, "id", i);
        if (!id.is_string() || id.get<std::string>().empty()) {
            throw Error(ErrorCode::parse, fmt::format("manifest[{}].id: must be a non-empty string", i));
        }
        m.id = id.get<std::string>();
        if (!seen_ids.insert(m.id).second) {
            throw Error(ErrorCode::parse, fmt::format("manifest[{}].id: duplicate id '{}'", i, m.id));
        }
        m.name = entry.value("name", m.id);
        const auto& year = require_field(entry, "year", i);
        if (!year.is_number_integer()) {
            throw Error(ErrorCode::parse, fmt::format("manifest[{}].year: must be an integer", i));
        }
        m.year = year.get<int>();
        if (m.year < kMinYear || m.year > kMaxYear) {
            throw Error(ErrorCode::parse,
                        fmt::format("manifest[{}].year: {} outside [{}, {}]", i, m.year, kMinYear,
                                    kMaxYear));
        }
        const auto& cat = require_field(entry, "category", i);
        const auto parsed = cat.is_string() ? category_from_name(cat.get<std::string>())
                                            : std::nullopt;
        if (!parsed) {
            throw Error(ErrorCode::parse,
                        fmt::format("manifest[{}].category: invalid value '{}'", i,
                                    cat.is_string() ? cat.get<std::string>() : cat.dump()));
        }
        m.category = *parsed;
        const auto& root = require_field(entry, "root", i);
        if (!root.is_string()) {
            throw Error(ErrorCode::parse, fmt::format("manifest[{}].root: must be a string", i));
        }
        fs::path root_path = root.get<std::string>();
        m.root = root_path.is_absolute() ? root_path : base / root_path;
        m.notes = entry.value("notes", "");
        manifests.push_back(std::move(m));
    }
    return manifests;
}

Corpus load(const fs::path& manifest_file, unsigned jobs) {
    Corpus corpus;
    corpus.samples = load_manifest(manifest_file);
    for (const auto& sample : corpus.samples) {
        auto scanned = scan(sample.root, sample, jobs);
        corpus.files.insert(corpus.files.end(), std::make_move_iterator(scanned.files.begin()),
                            std::make_move_iterator(scanned.files.end()));
        corpus.skipped.insert(corpus.skipped.end(), scanned.skipped.begin(), scanned.skipped.end());
    }
    std::sort(corpus.files.begin(), corpus.files.end(),
              [](const SourceFile& a, const SourceFile& b) {
                  return std::tie(a.sample_id, a.rel_path) < std::tie(b.sample_id, b.rel_path);
              });
    return corpus;
}

std::vector<const SourceFile*> Corpus::files_of(const std::string& sample_id) const {
    std::vector<const SourceFile*> out;
    for (const auto& f : files) {
        if (f.sample_id == sample_id) out.push_back(&f);
    }
    return out;
}

}  // namespace srcmetry::corpus
