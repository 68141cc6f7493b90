#pragma once

#include <stdexcept>
#include <string>

namespace posec {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closing the supplied relations would make some element lie below itself.
class CycleError : public Error {
 public:
  using Error::Error;
};

// An element index outside [0, n).
class ElementIndexError : public Error {
 public:
  using Error::Error;
};

// Posets must have at least one element.
class EmptyPosetError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration requested above the configured cap.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

// An operation that requires a maximal element was given another one.
class NotMaximalError : public Error {
 public:
  using Error::Error;
};

// Trial and poset sizes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ZeroTrialsError : public Error {
 public:
  using Error::Error;
};

// A parameter outside its documented domain (threshold, probability, size...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Malformed poset file or generator spec.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace posec
