#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lieswarm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSkew : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name)
      : Error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  explicit UnknownPreset(const std::string& name)
      : Error("unknown preset '" + name + "'") {}
};

/// Agent projects onto the embedding axis; its phase is undefined.
class DegeneratePhase : public Error {
 public:
  using Error::Error;
};

/// Two phases coincide exactly, so the repulsion direction is undefined.
class CoincidentPhase : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lieswarm
