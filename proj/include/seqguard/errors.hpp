#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqguard {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Formula text rejected; column is a 1-based character offset into the input.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t column)
        : Error(message + " (column " + std::to_string(column) + ")"), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

// Malformed or inconsistent policy-book / compiled-policy content.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Formula evaluated against an atom outside the declared predicate table.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Adapter transport failure or response that fails strict schema validation.
class AdapterError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed trace record; line is 1-based within the trace file.
class TraceError : public Error {
public:
    TraceError(const std::string& message, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace seqguard
