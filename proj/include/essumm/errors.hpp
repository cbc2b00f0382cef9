#pragma once

#include <stdexcept>
#include <string>

namespace essumm {

// Bad caller input: flags, parameters, configuration. Maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable, malformed, or inconsistent data files. Maps to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public DataError {
public:
    FormatError(const std::string& what, std::size_t byte_offset)
        : DataError(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Byte count of a file does not match its header.
class TruncationError : public FormatError {
public:
    using FormatError::FormatError;
};

class UnsupportedFormatError : public DataError {
public:
    using DataError::DataError;
};

class ValidationError : public DataError {
public:
    using DataError::DataError;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

// Input too small for the requested model (fewer frames than clusters, fewer than two segments).
class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

// Numerical precondition on an algorithm's input (too few points, bad component count).
class ParameterError : public UsageError {
public:
    using UsageError::UsageError;
};

// An internal postcondition did not hold. Maps to exit code 3.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace essumm
