#pragma once

#include <stdexcept>
#include <string>

namespace posauction {

/// Base for every error the library raises.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid input (unknown bidder id, mixed classes where a
/// homogeneous instance is required, non-strict instance for a verifier).
class InvalidInput : public Error
{
public:
  using Error::Error;
};

/// Bad tuning parameters (delta <= 0, epsilon out of range, ...).
class InvalidConfig : public Error
{
public:
  using Error::Error;
};

/// Marginal payment increase requested between two slots of equal CTR.
class DegeneratePair : public Error
{
public:
  using Error::Error;
};

/// Internal misuse of the incremental pricing state.
class ProtocolError : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  using Error::Error;
};

class GenerationError : public Error
{
public:
  using Error::Error;
};

}  // namespace posauction
