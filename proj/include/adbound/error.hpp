#pragma once

#include <stdexcept>
#include <string>

namespace adbound {

enum class ErrorKind { Input, Config, Resource, Internal };

/// Base class for all library failures. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input: bad indices, parse failures.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

/// Settings that cannot be honored (i-bound below the initial width, etc).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::Resource, what) {}
};

/// Broken invariant inside the library.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return 2;
    case ErrorKind::Config: return 3;
    case ErrorKind::Resource: return 4;
    case ErrorKind::Internal: return 1;
  }
  return 1;
}

}  // namespace adbound
