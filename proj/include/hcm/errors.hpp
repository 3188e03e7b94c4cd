#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

// Error taxonomy shared by every module. The CLI maps these onto its exit
// code contract: ParseError -> 2, the middle group -> 3, IoError -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operand dimensions disagree (matrix product, module pairing, ...).
struct ShapeError : Error {
  using Error::Error;
};

// Parameter outside its admissible range (descriptor guards, exponent windows).
struct DomainError : Error {
  using Error::Error;
};

// A stated precondition was violated at runtime (non-unitary factor,
// negative control value, incompatible perturbation pairing, ...).
struct ContractError : Error {
  using Error::Error;
};

// Iteration scaling would leave the representable range.
struct ScaleError : Error {
  using Error::Error;
};

// Configuration document is well-formed but semantically invalid.
struct ConfigError : Error {
  using Error::Error;
};

// Configuration document could not be read as a document at all.
struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace hcm
