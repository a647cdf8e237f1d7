#pragma once

#include <stdexcept>
#include <string>

namespace capri {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInstance : Error {
  using Error::Error;
};

/// A customer was charged more than her value for the assigned set.
struct BudgetViolation : Error {
  int customer;
  explicit BudgetViolation(int j)
      : Error("budget violated for customer " + std::to_string(j)), customer(j) {}
};

/// An item was assigned to more customers than its supply allows.
struct CapacityViolation : Error {
  int item;
  explicit CapacityViolation(int e)
      : Error("capacity violated for item " + std::to_string(e)), item(e) {}
};

struct UnsupportedEncoding : Error {
  using Error::Error;
};

struct NotATree : Error {
  using Error::Error;
};

/// Enumeration would exceed the configured search budget.
struct BudgetExceeded : Error {
  double size;
  explicit BudgetExceeded(double sz)
      : Error("enumeration budget exceeded: " + std::to_string(sz)), size(sz) {}
};

struct NumericFailure : Error {
  using Error::Error;
};

struct LpUnbounded : Error {
  using Error::Error;
};

struct LpInfeasible : Error {
  using Error::Error;
};

/// An integrality-gap verifier returned an allocation worth less than
/// (weighted LP optimum) / declared_factor.
struct VerifierContractBroken : Error {
  using Error::Error;
};

struct ModeMismatch : Error {
  using Error::Error;
};

/// Chain prices handed to the item-price reconstruction were not nonincreasing.
struct MonotoneViolation : Error {
  using Error::Error;
};

/// Column generation produced a column that does not improve the master LP.
struct NoProgress : Error {
  using Error::Error;
};

/// Price raise requested for a customer whose set shares every item with
/// another assigned set.
struct NoPrivateItem : Error {
  int customer;
  explicit NoPrivateItem(int j)
      : Error("no private item for customer " + std::to_string(j)), customer(j) {}
};

}  // namespace capri
