#pragma once

#include <stdexcept>
#include <string>

namespace qfilt {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed expression text; position is a 0-based byte offset.
struct ParseError : Error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Symbol referenced in an expression but absent from the symbol table.
struct UnresolvedSymbolError : ParseError {
  std::string symbol;
  UnresolvedSymbolError(const std::string& name, size_t pos)
      : ParseError("unresolved symbol '" + name + "'", pos), symbol(name) {}
};

// JSON document does not match the expected schema; path names the offending
// field, e.g. "entries[0][1]" or "A".
struct SchemaError : Error {
  std::string path;
  SchemaError(const std::string& at, const std::string& msg)
      : Error(msg + " (field '" + at + "')"), path(at) {}
};

// Evaluation requested too close to a pole of an entry.
struct PoleProximityError : Error {
  int row, col;
  PoleProximityError(int r, int c)
      : Error("evaluation at or near a pole of entry (" + std::to_string(r) + "," +
              std::to_string(c) + ")"),
        row(r), col(c) {}
};

// Frequency-domain solve hit a singular system matrix.
struct SingularityError : Error {
  using Error::Error;
};

// A mathematical precondition of an operation failed (wrong inertia,
// eigenvalue pair condition, non-symplectic feedthrough, ...).
struct ConditionError : Error {
  std::string condition;  // short machine-usable name
  ConditionError(const std::string& name, const std::string& msg)
      : Error(msg), condition(name) {}
};

}  // namespace qfilt
