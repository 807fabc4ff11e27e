#pragma once

#include <stdexcept>
#include <string>

namespace qngc {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The working Fock dimension is too small for the requested Gaussian operation.
class TruncationError : public Error {
public:
    using Error::Error;
};

// A Fock index lies outside the reporting space.
class IndexError : public Error {
public:
    using Error::Error;
};

// Phase-scan grid is too coarse or not uniform.
class GridError : public Error {
public:
    using Error::Error;
};

// Invalid hierarchy specification or search configuration.
class SpecError : public Error {
public:
    using Error::Error;
};

// A complex-parameter validation sample beat the optimized maximum.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The sampled F(lambda) is not convex in lambda.
class EnvelopeError : public Error {
public:
    using Error::Error;
};

// Perturbative noise model evaluated outside its region of validity.
class ModelValidityError : public Error {
public:
    using Error::Error;
};

// The noiseless state does not beat the threshold, so no depth exists.
class NoDepthError : public Error {
public:
    using Error::Error;
};

// A matrix that should be a density matrix is not one.
class StateError : public Error {
public:
    using Error::Error;
};

}  // namespace qngc
