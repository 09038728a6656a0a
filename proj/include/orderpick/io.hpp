#pragma once

#include <string>

namespace orderpick {

// Writes via a temporary file and rename so readers never see partial output.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace orderpick
