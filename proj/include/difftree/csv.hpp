#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace difftree::csv {

// Writes one RFC 4180 row terminated by '\n'. Fields containing a comma,
// quote, or line break are quoted.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Reads the next row. Quoted fields may span lines. Returns nullopt at EOF.
std::optional<std::vector<std::string>> read_row(std::istream& in);

}  // namespace difftree::csv
