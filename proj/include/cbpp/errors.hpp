#pragma once

#include <stdexcept>
#include <string>

namespace cbpp {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Instance data violates an invariant (bad lengths, duplicate (length,color), ...).
struct ValidationError : Error {
  using Error::Error;
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A multiset references unknown items or exceeds demands.
struct MalformedMultisetError : Error {
  explicit MalformedMultisetError(const std::string& what) : Error(what) {}
};

// Asked to sequence a multiset with discrepancy >= 2.
struct InfeasibleMultisetError : Error {
  explicit InfeasibleMultisetError(const std::string& what) : Error(what) {}
};

// Graph/instance/model mismatch detected by a builder or mapper.
struct StructuralError : Error {
  explicit StructuralError(const std::string& what) : Error(what) {}
};

// LP text emission failed (name collision, illegal name, ...).
struct EmitError : Error {
  explicit EmitError(const std::string& what) : Error(what) {}
};

// LP or solution file could not be parsed.
struct LpParseError : Error {
  explicit LpParseError(const std::string& what) : Error(what) {}
};

// Numerical failure inside the simplex / branch-and-bound machinery.
struct SolverError : Error {
  explicit SolverError(const std::string& what) : Error(what) {}
};

// External solver misbehaved (bad exit code, unparsable or infeasible output).
struct BackendError : Error {
  explicit BackendError(const std::string& what) : Error(what) {}
};

// Flow decomposition failed (infeasible input flow, stranded residual, ...).
struct DecompositionError : Error {
  explicit DecompositionError(const std::string& what) : Error(what) {}
};

// Brute-force oracle refused an input above its hard size guard.
struct GuardError : Error {
  explicit GuardError(const std::string& what) : Error(what) {}
};

// Random generator configuration is unusable (empty length range, ...).
struct GenerationError : Error {
  explicit GenerationError(const std::string& what) : Error(what) {}
};

// Donor BPP instance/solution pair fails validation during adaptation.
struct AdaptationError : Error {
  explicit AdaptationError(const std::string& what) : Error(what) {}
};

// Filesystem-level failure (missing file, malformed instance text, ...).
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace cbpp
