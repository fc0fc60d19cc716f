// Error types shared across the library. Everything derives from pisur::Error
// so callers can catch the whole family at once.
#pragma once

#include <stdexcept>
#include <string>

namespace pisur {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- dimension algebra ---
struct DimensionMismatch : Error { using Error::Error; };
struct NonDimensionlessArg : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };

// --- numeric evaluation ---
struct DomainError : Error { using Error::Error; };

// --- basis validation / transforms ---
struct WrongCount : Error { using Error::Error; };
struct NotIndependent : Error { using Error::Error; };
struct NotRepresentative : Error { using Error::Error; };
struct CuratedNotDimensionless : Error { using Error::Error; };
struct NoInverse : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };

// --- model fitting / prediction ---
struct CholeskyFailure : Error { using Error::Error; };
struct OptimizationFailure : Error { using Error::Error; };
struct ColumnMismatch : Error { using Error::Error; };
struct UnknownInput : Error { using Error::Error; };

// --- metrics / configuration ---
struct DegenerateDenominator : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace pisur
