#pragma once

#include <stdexcept>
#include <string>

namespace conceptlab {

/// Input data violates a documented invariant (bad unit, duplicate name, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A file or wire payload could not be parsed at all.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A scoring backend failed: network trouble, protocol violation, capability mismatch.
class BackendError : public std::runtime_error {
public:
    explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conceptlab
