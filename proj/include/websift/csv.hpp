#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace websift {

// Minimal RFC 4180-style delimited reader. Fields may be quoted with '"';
// embedded quotes are doubled; quoted fields may span newlines. Delimiter is
// configurable (default comma). CRLF and LF line endings are both accepted.
class CsvReader {
public:
    explicit CsvReader(std::istream& in, char delimiter = ',')
        : in_(in), delimiter_(delimiter) {}

    // Reads the next row. Returns false at EOF. Sets `error` (instead of
    // throwing) for structural problems like an unterminated quote.
    bool next_row(std::vector<std::string>& fields, std::string& error);

    // 1-based line number where the row that was just read started.
    std::size_t row_start_line() const { return row_start_line_; }

private:
    std::istream& in_;
    char delimiter_;
    std::size_t line_ = 1;
    std::size_t row_start_line_ = 1;
};

std::string csv_quote(const std::string& field, char delimiter = ',');
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields,
                   char delimiter = ',');

} // namespace websift
