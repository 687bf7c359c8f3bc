#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathopt
{

/// Malformed or invalid process/path file content.
class ParseError : public std::runtime_error
{
public:
  ParseError( std::string source, std::size_t line, std::string key, const std::string& message );

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

private:
  std::string source_;
  std::size_t line_;
  std::string key_;
};

/// Delay constraint below the minimum achievable delay of the path.
class InfeasibleError : public std::runtime_error
{
public:
  InfeasibleError( double tc_ps, double t_min_ps, const std::string& message );

  double tc() const noexcept { return tc_; }
  double t_min() const noexcept { return t_min_; }

private:
  double tc_;
  double t_min_;
};

/// Iterative solver exhausted its iteration budget.
class ConvergenceError : public std::runtime_error
{
public:
  ConvergenceError( int iterations, double residual, const std::string& message );

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  int iterations_;
  double residual_;
};

/// Illegal structural operation on a path (wrong gate kind, arity mismatch, ...).
class StructureError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace pathopt
