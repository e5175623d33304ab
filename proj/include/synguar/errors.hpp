#pragma once

#include <stdexcept>
#include <string>

namespace synguar {

/// Malformed user input: task files, program text, example files.
class InputError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource limit (entry cap, brute-force cap) was exceeded.
class ResourceCapError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while producing examples from a target.
class OracleError : public std::runtime_error
{
 public:
  OracleError(const std::string& what, std::string input_json = {})
      : std::runtime_error(what), d_input(std::move(input_json))
  {
  }

  /// JSON rendering of the input that triggered the failure, if any.
  const std::string& input() const { return d_input; }

 private:
  std::string d_input;
};

class OracleExhausted : public OracleError
{
 public:
  OracleExhausted() : OracleError("oracle exhausted") {}
};

class ProtocolError : public OracleError
{
 public:
  using OracleError::OracleError;
};

class TargetTimeout : public OracleError
{
 public:
  using OracleError::OracleError;
};

class TargetExited : public OracleError
{
 public:
  using OracleError::OracleError;
};

}  // namespace synguar
