#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellnewton {

/// Base class of all library exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: degenerate lattice, bad divisor, unparsable file.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Evaluation requested too close to a zero or pole.
class DivisorProximity : public Error {
public:
    DivisorProximity(const std::string& what, std::complex<double> nearest)
        : Error(what), nearest_(nearest) {}
    std::complex<double> nearest() const { return nearest_; }

private:
    std::complex<double> nearest_;
};

/// Iterative numerics (root finding, integration) failed to converge.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<std::complex<double>> witnesses = {})
        : Error(what), witnesses_(std::move(witnesses)) {}
    const std::vector<std::complex<double>>& witnesses() const { return witnesses_; }

private:
    std::vector<std::complex<double>> witnesses_;
};

/// A structural property required by an operation does not hold
/// (non-cellular map, E-property violation, saddle connection, ...).
class PropertyViolation : public Error {
public:
    using Error::Error;
};

/// The input is outside what an algorithm handles (e.g. a non-simple saddle
/// where simple ones are required).
class UnsupportedConfiguration : public Error {
public:
    using Error::Error;
};

}  // namespace ellnewton
