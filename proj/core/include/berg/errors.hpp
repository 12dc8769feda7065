#pragma once

#include <stdexcept>
#include <string>

namespace berg {

// Base class for every error raised by the library. Negative verdicts and
// failed comparisons are values, not exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// jets
class DivisionBySingularJet : public Error { using Error::Error; };
class LogOfZero : public Error { using Error::Error; };
class OrderExceeded : public Error { using Error::Error; };
class ShapeMismatch : public Error { using Error::Error; };

// geometry oracle
class NotPositiveDefinite : public Error { using Error::Error; };
class SingularMatrix : public Error { using Error::Error; };
class RealityViolation : public Error { using Error::Error; };
class SymmetryViolation : public Error { using Error::Error; };

// Hartogs closed forms
class DomainViolation : public Error { using Error::Error; };
class PositivityViolation : public Error { using Error::Error; };
class UnsupportedFamily : public Error { using Error::Error; };
class SingularAtZero : public Error { using Error::Error; };
class IntegrationBlowup : public Error { using Error::Error; };
class InvalidKind : public Error { using Error::Error; };

// Cartan catalog
class OutsideDomain : public Error { using Error::Error; };
class AlphaTooSmall : public Error { using Error::Error; };
class UnsupportedDomain : public Error { using Error::Error; };

}  // namespace berg
