#pragma once

#include <stdexcept>
#include <string>

namespace grasscurve {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: shape mismatches, bad tuples, unparsable files,
// matrices that fail their stated precondition (singular, non-unitary).
class InputError : public Error {
 public:
  using Error::Error;
};

// Input was well formed but the mathematics refuses it: a point that is not
// an immersion, a reparametrization that leaves the polynomial chart, an
// index chain the lower-bound probe cannot resolve.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace grasscurve
