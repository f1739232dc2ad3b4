#pragma once

#include <stdexcept>
#include <string>

namespace wqc {

/// Bad arguments: dimension mismatches, out-of-range constants, unknown ids.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The requested constants put the method outside its admissible regime
/// (e.g. the alpha equation has no root in (0, 1)).
class ParameterRegimeError : public std::runtime_error {
public:
  explicit ParameterRegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// A maintained inequality failed beyond tolerance mid-run. Usually means the
/// supplied (L, gamma, mu) are not valid for the oracle.
class InvariantViolation : public std::runtime_error {
public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

/// A gain left the set of stabilizing feedbacks (spectral radius >= 1).
class InstabilityError : public std::runtime_error {
public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wqc
