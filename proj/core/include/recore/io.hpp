#pragma once

#include <string>

namespace recore::io {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace recore::io
