#pragma once

#include <map>
#include <string>

namespace jamcast {

// Minimal key=value config reader: one `key = value` pair per line, blank
// lines and '#' comments allowed. Duplicate keys are an error.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

}  // namespace jamcast
