#pragma once

#include <stdexcept>
#include <string>

namespace bmdist {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch (non-square input, ragged rows, mismatched block sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Exact and floating scalars were combined in one operation.
class ModeError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// A dimension or order beyond what the library supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Generator has an entry outside [-1, 1].
class InfeasibleGeneratorError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An inequality that holds by theorem was violated on concrete data.
class AuditFailure : public Error {
 public:
  using Error::Error;
};

class FamilyError : public Error {
 public:
  using Error::Error;
};

// Requested alpha provenance is not available.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

class SearchFailure : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace bmdist
