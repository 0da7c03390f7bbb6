#pragma once

#include <stdexcept>
#include <string>

namespace cascademix {

// Input that violates a documented precondition or file-format contract.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Cascade set carries no transmission information (every cascade has
// fewer than two activated nodes).
struct DegenerateDataError : ValidationError {
  explicit DegenerateDataError(const std::string& what) : ValidationError(what) {}
};

// Reference network has no positive entries, so relative errors are undefined.
struct EmptySupportError : ValidationError {
  explicit EmptySupportError(const std::string& what) : ValidationError(what) {}
};

struct GenerationFailureError : std::runtime_error {
  explicit GenerationFailureError(const std::string& what) : std::runtime_error(what) {}
};

struct SvdFailureError : std::runtime_error {
  explicit SvdFailureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cascademix
