#pragma once

#include <stdexcept>
#include <string>

namespace fairsched {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (bad JSON, unparseable token). Message names the
// line or byte offset where parsing stopped.
class ParseError : public Error {
public:
  using Error::Error;
};

// Structurally valid input with illegal content (negative size, duplicate
// id). Message names the offending job index.
class ValidationError : public Error {
public:
  using Error::Error;
};

// An argument outside its documented domain (k out of range, n too small).
class ParameterError : public Error {
public:
  using Error::Error;
};

// Ratio computations on an instance with zero total work.
class DegenerateInstanceError : public Error {
public:
  using Error::Error;
};

// Exact enumeration would exceed the configured outcome cap.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// Filesystem failure while writing output.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace fairsched
