#pragma once

#include <stdexcept>
#include <string>

namespace inls {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// NaN/Inf in a field or a failed linear solve
class InvalidState : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class BracketFailure : public Error {
 public:
  using Error::Error;
};

class NoBlowup : public Error {
 public:
  using Error::Error;
};

class DegenerateField : public Error {
 public:
  using Error::Error;
};

class MissingSnapshot : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace inls
