#pragma once

#include <stdexcept>
#include <string>

namespace cewe {

// Bad configuration or usage; the CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or degenerate data; the CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus/dataset record that does not follow the expected line format.
class ParseError : public DataError {
 public:
  ParseError(const std::string& msg, long line)
      : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Broken embedding file; carries the byte offset where reading failed.
class FormatError : public DataError {
 public:
  FormatError(const std::string& msg, long long offset)
      : DataError(msg + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  long long offset() const { return offset_; }

 private:
  long long offset_;
};

}  // namespace cewe
