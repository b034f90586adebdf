#pragma once

#include <stdexcept>
#include <string>

namespace oligo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search or enumeration would exceed a configured cap. Never swallowed:
// a check that hits a cap reports an error rather than a vacuous pass.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace oligo
