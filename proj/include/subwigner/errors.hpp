#pragma once
#include <stdexcept>
#include <string>

namespace subwigner {

// Bad input: malformed config, parameter out of domain, label mismatch.
// Mapped to exit code 1 by the CLI.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical invariant the implementation guarantees was violated at
// runtime (e.g. the Hermitian trace residue).  Mapped to exit code 3.
struct NumericalContractError : std::runtime_error {
  explicit NumericalContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// No closed-form overlap profile is registered for a sequence-kind pair;
// callers may fall back to alpha_estimate.
struct NoClosedFormError : ValidationError {
  explicit NoClosedFormError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace subwigner
