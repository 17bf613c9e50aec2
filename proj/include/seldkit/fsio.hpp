#pragma once

#include <filesystem>
#include <string>

namespace seldkit {

/// Writes the whole file through a temporary sibling followed by a rename,
/// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace seldkit
