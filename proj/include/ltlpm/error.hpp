#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltlpm {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula or rule text. Positions are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t line, std::size_t column,
              std::vector<std::string> expected = {})
      : Error(format(message, line, column, expected)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column,
                            const std::vector<std::string>& expected) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i != 0) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

class UnknownOperator : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class EmptyPremises : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

/// A model or profile document failed validation. The message is prefixed
/// with a JSON-pointer style path to the offending value.
class InvalidModel : public Error {
 public:
  InvalidModel(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class UnknownAtom : public Error {
 public:
  explicit UnknownAtom(const std::string& name)
      : Error("atom '" + name + "' is not a letter of the model"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NonUniformShift : public Error {
 public:
  NonUniformShift() : Error("shift is only meaning-preserving for uniform bounds") {}
};

/// A search or expansion would exceed its configured budget. `required` is
/// the size the operation would have needed (saturated at max on overflow).
class CapacityExceeded : public Error {
 public:
  CapacityExceeded(const std::string& what, std::size_t limit, std::size_t required)
      : Error(what + " exceeds capacity: needs " + std::to_string(required) +
              ", limit " + std::to_string(limit)),
        limit_(limit),
        required_(required) {}

  std::size_t limit() const noexcept { return limit_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t limit_;
  std::size_t required_;
};

class IncompatibleAgents : public Error {
 public:
  using Error::Error;
};

class NestedKnowledgeUnsupported : public Error {
 public:
  NestedKnowledgeUnsupported()
      : Error("knowledge operators nested under agent-wise evaluation are not supported") {}
};

}  // namespace ltlpm
