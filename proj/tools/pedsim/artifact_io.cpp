// SPDX-License-Identifier: Apache-2.0
#include "artifact_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pedsim/random.hpp"

namespace pedsim::cli {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return std::move(buffer).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  const fs::path dir = path.parent_path();
  if (!dir.empty()) {
    fs::create_directories(dir, ec);
    if (ec)
      throw IoError("cannot create directory " + dir.string() + ": " +
                    ec.message());
  }
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + temp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("error while writing " + temp.string());
  }
  fs::rename(temp, path, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw IoError("cannot finalize " + path.string());
  }
}

std::string file_fingerprint(const fs::path& path) {
  const std::string bytes = read_file(path);
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

}  // namespace pedsim::cli
