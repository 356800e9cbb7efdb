// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_ERROR_HPP_
#define ROK_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rok {

// Base class for every domain error raised by the library. The CLI maps any
// rok::Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

class LinkError : public Error {
 public:
  using Error::Error;
};

class RenderError : public Error {
 public:
  RenderError(const std::string &placeholder)
      : Error("missing binding for placeholder {" + placeholder + "}"),
        placeholder_(placeholder) {}
  const std::string &placeholder() const { return placeholder_; }

 private:
  std::string placeholder_;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  TransportError(const std::string &what, int retries)
      : Error(what + " (after " + std::to_string(retries) + " retries)"),
        retries_(retries) {}
  int retries() const { return retries_; }

 private:
  int retries_;
};

class ScriptedGapError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string &key, const std::string &what)
      : Error(key + ": " + what), key_(key) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rok

#endif  // ROK_ERROR_HPP_
