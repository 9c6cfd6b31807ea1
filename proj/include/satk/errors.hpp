// SPDX-License-Identifier: Apache-2.0
#ifndef SATK_ERRORS_HPP
#define SATK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace satk {

class Error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

class InvalidInput : public Error
{
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "InvalidInput"; }
};

class NumericalFailure : public Error
{
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalFailure"; }
};

/// Raised when a separation or similarity is too ill-conditioned to trust.
/// `residual()` carries the offending residual or condition estimate.
class IllConditioned : public Error
{
 public:
  IllConditioned(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual)
  {
  }
  const char* kind() const noexcept override { return "IllConditioned"; }
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class OverflowError : public Error
{
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "OverflowError"; }
};

class ParseError : public Error
{
 public:
  ParseError(const std::string& what, long line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
  {
  }
  const char* kind() const noexcept override { return "ParseError"; }
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class UsageError : public Error
{
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UsageError"; }
};

}  // namespace satk

#endif
