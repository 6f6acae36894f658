#pragma once

#include <stdexcept>
#include <string>

namespace subdiv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed call: wrong dimensions, negative orders, empty families.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain of an operation (zero coordinate,
/// parameter outside the polytope).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The zero polynomial has no mask.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

/// The symbol is not divisible by the smoothing factor the caller asked for.
class NotEnoughSumRulesError : public Error {
 public:
  NotEnoughSumRulesError(const std::string& what, int achieved)
      : Error(what), achieved_(achieved) {}
  int achieved_order() const noexcept { return achieved_; }

 private:
  int achieved_;
};

/// The difference subspace failed its invariance check.
class SumRuleInconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Input document could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace subdiv
