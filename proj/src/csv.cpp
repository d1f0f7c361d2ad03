#include "websift/csv.hpp"

namespace websift {

bool CsvReader::next_row(std::vector<std::string>& fields, std::string& error) {
    fields.clear();
    error.clear();

    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return false;
    row_start_line_ = line_;

    std::string field;
    bool in_quotes = false;
    bool row_done = false;
    bool any = false;

    while (!row_done) {
        if (c == std::istream::traits_type::eof()) {
            if (in_quotes) {
                error = "unterminated quoted field";
                return false;
            }
            break;
        }
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                int peek = in_.peek();
                if (peek == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == delimiter_) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r') {
            if (in_.peek() == '\n') in_.get();
            ++line_;
            row_done = true;
        } else if (ch == '\n') {
            ++line_;
            row_done = true;
        } else {
            field.push_back(ch);
        }
        if (!row_done) c = in_.get();
    }

    if (any || !fields.empty()) fields.push_back(std::move(field));
    return true;
}

std::string csv_quote(const std::string& field, char delimiter) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return field;
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.put(delimiter);
        out << csv_quote(fields[i], delimiter);
    }
    out.put('\n');
}

} // namespace websift
