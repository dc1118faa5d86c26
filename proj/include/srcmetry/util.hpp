// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "srcmetry/types.hpp"

namespace srcmetry::util {

/// SHA-256 of a byte buffer.
Digest sha256(std::string_view bytes);

/// Decode raw bytes as UTF-8, falling back to Latin-1; never fails.
std::string decode_text(std::string_view bytes);

/// True if the buffer looks binary (contains a NUL byte).
bool looks_binary(std::string_view bytes);

/// Split decoded text into physical lines. A trailing newline does not
/// produce an extra empty line.
std::vector<std::string> split_lines(std::string_view text);

std::string to_lower(std::string_view s);

/// Run fn(i) for i in [0, n) on up to `jobs` threads. Order of execution is
/// unspecified; callers are responsible for deterministic merging.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace srcmetry::util
