#pragma once

#include <stdexcept>
#include <string>

namespace broac {

// Malformed input: unknown types or entities, duplicate definitions,
// dangling references, abilities outside the vocabulary.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A guarded mutation attempted by an actor who lacks the required ability.
// Distinct from ValidationError so callers can map it to a different exit path.
class AuthorizationError : public std::runtime_error {
public:
    explicit AuthorizationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace broac
