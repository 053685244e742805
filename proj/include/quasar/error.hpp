#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quasar {

// Machine-readable error category, also used to derive CLI exit codes.
enum class ErrorCategory {
  kInternal,
  kUsage,
  kParse,
  kIo,
  kCatalog,
  kTransport,
  kConfig,
};

const char* category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

// Malformed input record. line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class CatalogError : public Error {
 public:
  explicit CatalogError(const std::string& message)
      : Error(ErrorCategory::kCatalog, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::kConfig, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCategory::kIo, message) {}
};

// A remote model endpoint could not be reached or replied garbage.
// Always retriable; endpoint() names the service that failed.
class TransportError : public Error {
 public:
  TransportError(const std::string& endpoint, const std::string& cause);

  const std::string& endpoint() const { return endpoint_; }
  const std::string& cause() const { return cause_; }
  bool retriable() const { return true; }

 private:
  std::string endpoint_;
  std::string cause_;
};

}  // namespace quasar
