#pragma once

#include <stdexcept>
#include <string>

namespace tcrrgu {

// Root of the library's error hierarchy. Everything thrown on a user-facing
// path derives from this, so callers can catch one type at the boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix sizes between related arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// marginal_value(side=below) asked at quantity zero: there is no consumed
// interval below zero.
class BelowZeroError : public Error {
 public:
  using Error::Error;
};

// Tail level outside (0, 1].
class AlphaRangeError : public Error {
 public:
  using Error::Error;
};

// Clearing price requested while exactly one of the receiver/giver sides is
// empty.  Conservation makes this impossible for curves with positive prices,
// so it signals an internal inconsistency (or zero-value surplus giving).
class OneSidedError : public Error {
 public:
  using Error::Error;
};

// A redistribution program came back infeasible or unbounded.  The zero-flow
// point is always feasible for a valid instance, so this is a consistency
// failure, not a user error.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Equilibrium enumeration would exceed the configured profile budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// Failure to read a file at all.
class IoError : public Error {
 public:
  using Error::Error;
};

// Structurally broken input (bad JSON, missing keys, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcrrgu
