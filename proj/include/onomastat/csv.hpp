#pragma once

#include <string>
#include <vector>

namespace onomastat::csv {

struct Row {
    long long line = 0;  // 1-based line of the row's first character
    std::vector<std::string> fields;
};

// Reads a whole CSV file. RFC-4180-ish: comma separated, double quotes,
// "" escapes, CRLF tolerated, quoted fields may span lines. The header row
// is returned like any other; fully empty trailing lines are dropped.
std::vector<Row> read_file(const std::string& path);

// Same, from an in-memory buffer (the `path` is used in error messages).
std::vector<Row> parse(const std::string& text, const std::string& path);

std::string escape(const std::string& field);
std::string join(const std::vector<std::string>& fields);

}  // namespace onomastat::csv
