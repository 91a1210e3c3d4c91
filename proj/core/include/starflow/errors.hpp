#ifndef STARFLOW_ERRORS_HPP
#define STARFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starflow {

/// Bad arguments or configuration; maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure during a run; maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adjacent nodes (or node speeds) collapsed below the degeneracy threshold.
class DegenerateCurveError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A node sits on the origin while a radial quantity was requested.
class OriginCrossingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// cos(psi) dropped below the required margin; message names the worst node.
class NotStarShapedError : public NumericalError {
public:
    NotStarShapedError(std::size_t node, double cospsi, double margin)
        : NumericalError("curve is not star-shaped: node " + std::to_string(node) +
                         " has cos(psi) = " + std::to_string(cospsi) +
                         " < margin " + std::to_string(margin)),
          node_(node), cospsi_(cospsi) {}

    std::size_t node() const { return node_; }
    double cospsi() const { return cospsi_; }

private:
    std::size_t node_;
    double cospsi_;
};

/// <xi, eta_nu> <= 0: the evaluation point left the star-shaped cone.
class ConeViolationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Operation requires g == 1 (no oracle is available otherwise).
class UnsupportedAnisotropyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace starflow

#endif
