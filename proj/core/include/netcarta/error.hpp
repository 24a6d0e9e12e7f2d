#pragma once

#include <stdexcept>
#include <string>

namespace netcarta {

// Base for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: CIDR strings, JSON documents, configs, queries.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value that is well-formed but violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Dangling or otherwise inconsistent references between IR nodes.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class RenderError : public Error {
 public:
  using Error::Error;
};

}  // namespace netcarta
