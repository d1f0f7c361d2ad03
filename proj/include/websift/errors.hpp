#pragma once

#include <stdexcept>
#include <string>

namespace websift {

// Input file / column-map problems (wrong header, unknown label token, ...).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values, empty columns, other bad numeric input.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Violations of the evaluation protocol (too few samples per class,
// leakage-audit failures, ...). The CLI maps these to a nonzero exit code.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace websift
