#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient space too large, or an incompatible degree/dimension pair.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization of a jet-frame Gram matrix failed.
class GramDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A verdict was requested on a topology result that is not certified.
class UncertifiedError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rlab
