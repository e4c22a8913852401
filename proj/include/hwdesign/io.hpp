#pragma once

#include "hwdesign/model.hpp"

namespace hwdesign::io {

// Line-oriented text format, one certificate per file. Serialization
// canonicalizes cycle rotations/directions; parse(serialize(c)) == canonical c.
// Parse failures throw DesignError("PARSE_ERROR", ...) with line and column.
std::string serialize(const Certificate& cert);
Certificate parse(const std::string& text);

Certificate load_file(const std::string& path);
void save_file(const std::string& path, const Certificate& cert);

}  // namespace hwdesign::io
