// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pedsim::cli {

// Environment / filesystem failure, as opposed to bad user input. Commands
// map this to exit code 2 and everything else to exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

// Creates parent directories, writes to a sibling temp file, then renames,
// so readers never observe a partial artifact.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// FNV-1a of a file's bytes as "0x" + 16 hex digits, for manifests.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace pedsim::cli
