#ifndef SMEFD_ERRORS_HPP
#define SMEFD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace smefd
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes disagree, or an index is out of range.
class DimensionError : public Error
{
public:
	using Error::Error;
};

/// An uncertainty bound or interval endpoint is invalid (negative, inverted, NaN).
class BoundError : public Error
{
public:
	using Error::Error;
};

/// A polytope that must be nonempty is empty.
class EmptinessError : public Error
{
public:
	using Error::Error;
};

/// A polytope that must be bounded is not.
class UnboundednessError : public Error
{
public:
	using Error::Error;
};

/// An optimization problem has no feasible point.
class InfeasibleError : public Error
{
public:
	using Error::Error;
};

/// Iteration limits or breakdowns inside a numerical kernel.
class NumericalError : public Error
{
public:
	using Error::Error;
};

/// Scenario configuration failed validation.
class ConfigError : public Error
{
public:
	using Error::Error;
};

} // namespace smefd

#endif // SMEFD_ERRORS_HPP
