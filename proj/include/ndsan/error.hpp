#pragma once

#include <stdexcept>
#include <string>

namespace ndsan {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph errors (sampler / numeric).
struct CyclicGraphError : Error {
  using Error::Error;
};
struct MultipleSourcesOrSinksError : Error {
  using Error::Error;
};

// Grid-distribution errors (numeric).
struct GridMismatchError : Error {
  using Error::Error;
};
struct WeightSumError : Error {
  using Error::Error;
};
struct InvalidLoopProbsError : Error {
  using Error::Error;
};
struct NotReducibleError : Error {
  using Error::Error;
};
struct SupportExceedsGridError : Error {
  using Error::Error;
};

// Statistics errors.
struct EmptySampleError : Error {
  using Error::Error;
};
struct UnsupportedEpsilonError : Error {
  using Error::Error;
};
struct UnsupportedConfidenceError : Error {
  using Error::Error;
};

// Document / export errors.
struct SyntaxError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace ndsan
