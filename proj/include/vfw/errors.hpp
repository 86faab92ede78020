#pragma once
#include <stdexcept>
#include <string>

namespace vfw {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two fields live on different grids, or vector dimensions disagree.
struct GridMismatchError : Error {
  using Error::Error;
};

// A differential operator was asked to act on a non-periodic grid.
struct UnsupportedBoundaryError : Error {
  using Error::Error;
};

// Input data violates a documented precondition (divergence-free, zero mean,
// net charge, continuity, ...).
struct ConstraintViolationError : Error {
  using Error::Error;
};

// A formula left its domain of validity (negative radicand, superluminal
// velocity, vanishing effective mass, ...).
struct DomainError : Error {
  using Error::Error;
};

// Requested time step is unstable for the explicit field integrator.
struct CflError : Error {
  CflError(const std::string& what, double suggested) : Error(what), suggested_dt(suggested) {}
  double suggested_dt;
};

// Scenario file failed schema validation.
struct ScenarioError : Error {
  using Error::Error;
};

}  // namespace vfw
