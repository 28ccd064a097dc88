#pragma once

#include <stdexcept>
#include <string>

namespace qwig {

// Base class for all toolkit errors. Subclasses map one-to-one onto the
// failure modes of the public operations, so callers can catch narrowly.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs with inconsistent shapes (matrix not square, tuple members of
// different sizes, coefficient vector of the wrong length, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Matrix fails the Hermiticity tolerance; message carries max |M - M^*|.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

// Vector is not normalized within tolerance.
class NotNormalized : public Error {
 public:
  using Error::Error;
};

// State fails positivity or unit-trace validation.
class NotDensity : public Error {
 public:
  using Error::Error;
};

// Operator expected to be positive semidefinite is not.
class NotPsd : public Error {
 public:
  using Error::Error;
};

// An iterative dense solver failed to converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// Moment degree beyond the supported cap.
class DegreeTooHigh : public Error {
 public:
  using Error::Error;
};

// Operation requires simple spectra but a degeneracy was detected.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

// Block projections passed to the block-decomposition evaluator do not
// commute with the operator tuple.
class NotReducing : public Error {
 public:
  using Error::Error;
};

// Branch evaluation requested at a (near-)degenerate point.
class DegenerateBranch : public Error {
 public:
  using Error::Error;
};

// Catalog lookup with an unknown name.
class UnknownExample : public Error {
 public:
  using Error::Error;
};

// File could not be read/written/parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

// Complex-square-root branch tracking failed (defensive; cannot occur for
// the regularized qubit reference with epsilon > 0).
class BranchAmbiguity : public Error {
 public:
  using Error::Error;
};

}  // namespace qwig
