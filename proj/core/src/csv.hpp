#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wikimento::detail {

// RFC 4180 quoting, minus embedded line breaks (no field we write or read
// legitimately contains one).
inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one physical CSV line. Returns false on quoting errors.
inline bool csv_split(std::string_view line, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
      ++i;
      continue;
    }
    field += c;
    ++i;
  }
  if (quoted) return false;
  out.push_back(std::move(field));
  return true;
}

}  // namespace wikimento::detail
