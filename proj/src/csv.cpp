#include "onomastat/csv.hpp"

#include <fstream>
#include <sstream>

#include "onomastat/errors.hpp"

namespace onomastat::csv {

std::vector<Row> parse(const std::string& text, const std::string& path) {
    std::vector<Row> rows;
    Row cur;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    long long line = 1;
    cur.line = 1;

    auto end_field = [&] {
        cur.fields.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        // Drop rows that are a single empty field (blank lines).
        if (!(cur.fields.size() == 1 && cur.fields[0].empty())) rows.push_back(cur);
        cur = Row{};
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (!row_started) {
            cur.line = line;
            row_started = true;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // swallow; \n handles the row break
        } else if (c == '\n') {
            ++line;
            end_row();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes)
        throw InputError(path + ": unterminated quoted field starting near line " +
                         std::to_string(cur.line));
    if (row_started) end_row();
    return rows;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::string escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace onomastat::csv
