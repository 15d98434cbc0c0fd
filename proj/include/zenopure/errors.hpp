#pragma once

#include <stdexcept>
#include <string>

namespace zeno
{

/// Root of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Invalid arguments or inputs that violate a type invariant.
class InvalidArgument : public Error
{
public:
	using Error::Error;
};

class DimensionMismatch : public InvalidArgument
{
public:
	using InvalidArgument::InvalidArgument;
};

class NonHermitianInput : public InvalidArgument
{
public:
	using InvalidArgument::InvalidArgument;
};

/// Failures of the numerics themselves (the inputs were well formed).
class NumericError : public Error
{
public:
	using Error::Error;
};

class ConvergenceFailure : public NumericError
{
public:
	using NumericError::NumericError;
};

/// Post-selection probability vanished; the conditional state is undefined.
class ZeroProbability : public NumericError
{
public:
	using NumericError::NumericError;
};

class NoDominantEigenvalue : public NumericError
{
public:
	using NumericError::NumericError;
};

/// The closed-form eigenvalue branch does not apply at these parameters.
class BranchUnavailable : public InvalidArgument
{
public:
	using InvalidArgument::InvalidArgument;
};

} // namespace zeno
