// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_ERRORS_HPP
#define HHGOCT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hhgoct
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: length mismatch, non-positive sizes, bad grids.
class InvalidInput : public Error
{
public:
  using Error::Error;
};

class DegenerateFilter : public Error
{
public:
  using Error::Error;
};

// Broken pre- or postcondition at a module boundary.
class ContractError : public Error
{
public:
  using Error::Error;
};

class PropagationError : public Error
{
public:
  using Error::Error;
};

class LineSearchError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace hhgoct

#endif  // HHGOCT_ERRORS_HPP
