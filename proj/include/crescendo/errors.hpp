#pragma once

#include <stdexcept>
#include <string>

namespace crescendo {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error("parse error: " + msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg)
        : std::runtime_error("validation error: " + msg) {}
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error("format error: " + msg) {}
};

// Precompute table was built against a different network.
struct StaleTableError : std::runtime_error {
    explicit StaleTableError(const std::string& msg)
        : std::runtime_error("stale table: " + msg) {}
};

// Scan has no entry resolvable against the network database.
struct NoUsableCellsError : std::runtime_error {
    explicit NoUsableCellsError(const std::string& msg)
        : std::runtime_error("no usable cells: " + msg) {}
};

}  // namespace crescendo
