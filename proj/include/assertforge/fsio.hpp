// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace assertforge::fsio {

std::string read_file(const std::filesystem::path& p);
std::vector<uint8_t> read_file_bytes(const std::filesystem::path& p);

// Write-temp-then-rename so rerunning a pipeline never leaves torn artifacts.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

// Regular files under dir with one of the given extensions (e.g. {".md",".txt"}),
// sorted by path for deterministic traversal. Non-recursive.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::vector<std::string>& exts);

} // namespace assertforge::fsio
