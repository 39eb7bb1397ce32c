#pragma once

#include <stdexcept>
#include <string>

namespace qweak {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the convergence domain of the q-exponential
// (equivalently: the requested q-coherent state is not normalizable).
class DomainError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class DimensionOverflow : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// The first-order pointer has a non-positive norm bracket: the weak regime has been left.
class NonPositiveNorm : public Error {
public:
    using Error::Error;
};

class ZeroMeanPhoton : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qweak
