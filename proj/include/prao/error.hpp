#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prao {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A forecast was requested for an hour outside the live weather window.
class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UpdateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Workload generation could not satisfy its constraints.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace prao
