// Error types shared across the library; the CLI maps them to exit codes.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathsrl {

// Malformed input data (corpus files, misaligned corpora).
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  explicit CorpusError(const std::string& message)
      : std::runtime_error(message), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bad configuration values or unusable search spaces.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failures.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model/bundle files that fail magic, version or shape checks.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two tree nodes that are not connected (multi-root forests).
class NoPathError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pathsrl
