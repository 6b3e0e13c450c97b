#pragma once

#include <stdexcept>
#include <string>

namespace chronos {

// Input or configuration rejected before anything ran.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

// A running trial cannot continue (non-finite state, degenerate adaptation).
class TrialAbort : public std::runtime_error {
 public:
  explicit TrialAbort(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chronos
