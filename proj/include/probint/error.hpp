#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace probint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected,
             const std::string& found);

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(std::string name)
      : Error("unbound variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// A truth-table enumeration would exceed the configured variable cap.
class ExpansionTooLarge : public Error {
 public:
  ExpansionTooLarge(std::size_t variables, std::size_t cap)
      : Error("expansion over " + std::to_string(variables) +
              " variables exceeds cap " + std::to_string(cap)),
        variables_(variables),
        cap_(cap) {}
  std::size_t variables() const { return variables_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t variables_;
  std::size_t cap_;
};

/// Input violates a documented invariant (bad probability, duplicate tuple,
/// malformed document, missing variable probability, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// No pair of source worlds is compatible.
class EmptyIntegration : public Error {
 public:
  EmptyIntegration() : Error("no pair of source worlds is compatible") {}
};

/// Some component of the compatibility graph is not probabilistically
/// balanced.
class ProbConstraintViolation : public Error {
 public:
  ProbConstraintViolation(std::size_t component, const std::string& detail)
      : Error("probabilistic constraint violated in component " +
              std::to_string(component) + ": " + detail),
        component_(component) {}
  std::size_t component() const { return component_; }

 private:
  std::size_t component_;
};

/// An epr-relation has no constraint-satisfying truth assignment.
class NoValidAssignment : public Error {
 public:
  NoValidAssignment() : Error("no truth assignment satisfies the constraints") {}
};

/// The epr-relation is not recognized as the integration of two
/// pr-relations.
class NotIntegrated : public Error {
 public:
  explicit NotIntegrated(const std::string& reason)
      : Error("not recognized as integrated: " + reason) {}
};

}  // namespace probint
