#pragma once

#include <stdexcept>
#include <string>

namespace pgdheat {

/// Mismatched array sizes (field vs grid, series vs series, ...).
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear algebra breakdown (singular system, non-finite result).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file. Carries the offending line when known (1-based, 0 = n/a).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string path, long line = 0)
        : std::runtime_error(path + (line > 0 ? ":" + std::to_string(line) : "") + ": " + what),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const { return path_; }
    long line() const { return line_; }

private:
    std::string path_;
    long line_;
};

/// Filesystem-level failure (missing file, unwritable directory, bad format version).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pgdheat
