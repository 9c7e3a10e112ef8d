#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aiaas {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: a topology, chain, config or dataset that breaks its schema.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A reservation would exceed a capacity. `component()` is one of
/// "cpu", "mem", "storage", "bandwidth".
class CapacityError : public Error {
 public:
  CapacityError(std::string component, const std::string& what)
      : Error(what), component_(std::move(component)) {}
  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

/// Lifecycle verb applied in a state that does not allow it.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Text input that could not be parsed; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// No placement satisfies a chain's requirements. `constraint()` names the
/// first unsatisfiable one: "coverage", "cpu", "mem", "storage", "latency",
/// "bandwidth", "reliability" or "search" when the search budget ran out.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string constraint, const std::string& what)
      : Error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, const std::string& what) : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace aiaas
