#pragma once

#include <filesystem>
#include <string>

namespace specfid::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
void ensure_dir(const std::filesystem::path& dir);

}  // namespace specfid::io
