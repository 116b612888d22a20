#pragma once

#include <stdexcept>
#include <string>

namespace shillbid {

// Error taxonomy. The CLI maps each family onto an exit code:
// IoError -> 1, SchemaError / ConfigError -> 2, InvariantError -> 3.

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A single field failed to parse (bad month, malformed money text, ...).
class ParseError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A metric value left [0, 1].
class OutlierError : public InvariantError {
public:
    using InvariantError::InvariantError;
};

}  // namespace shillbid
