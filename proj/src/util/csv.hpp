#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace socsim {

// RFC-4180 style quoting: fields with comma, quote, CR or LF are wrapped in
// double quotes with embedded quotes doubled.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
void write_csv_row(std::string& out, const std::vector<std::string>& fields);

// Parses a whole CSV document, honoring quoted fields with embedded
// separators and newlines. Returns one vector of fields per record.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace socsim
