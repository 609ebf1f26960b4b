#pragma once

#include <stdexcept>
#include <string>

namespace mixexp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain X of a discrete structure (or the support
/// of a continuous one).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Integer/rational parameter violates a structural threshold such as
/// n > 2a or n > a(m+2).
class ParameterError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

class QuadratureError : public Error {
public:
  using Error::Error;
};

/// Series truncation could not reach the requested tail mass.
class TruncationError : public Error {
public:
  using Error::Error;
};

class UnknownFamily : public Error {
public:
  using Error::Error;
};

class InadmissibleTriple : public Error {
public:
  using Error::Error;
};

class UnknownPreset : public Error {
public:
  using Error::Error;
};

class SamplerError : public Error {
public:
  using Error::Error;
};

class IndexError : public Error {
public:
  using Error::Error;
};

} // namespace mixexp
