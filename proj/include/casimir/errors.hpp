#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A SpectralPoint with kappa <= 0 reached an optics evaluation.
class NonPositiveKappa : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

// delta_far called on adjacent or overlapping plate indices.
class NotNonAdjacent : public Error {
public:
    using Error::Error;
};

// Operation requires at least two plates (or n >= 2 for chain enumeration).
class TooSmall : public Error {
public:
    using Error::Error;
};

class TooFewPlates : public Error {
public:
    using Error::Error;
};

// A Fabry-Perot pair denominator came out non-positive; cannot occur for
// passive plates, so this signals nonphysical inputs.
class DegenerateCavity : public Error {
public:
    using Error::Error;
};

// Closed-form region matrices exist for N <= 3 only.
class UnsupportedN : public Error {
public:
    using Error::Error;
};

// Green's function evaluation requested exactly on a plate plane.
class OnPlatePlane : public Error {
public:
    using Error::Error;
};

// Finite-difference stencil would cross a plate plane or the source point.
class StraddlesPlateOrSource : public Error {
public:
    using Error::Error;
};

// Verbatim stress-tensor integrals are valid only when every coefficient
// depends on kappa alone (ideal or vacuum plates).
class RequiresKappaOnly : public Error {
public:
    using Error::Error;
};

// Adaptive integration ran out of subdivisions; carries the best estimate.
class QuadratureNotConverged : public Error {
public:
    QuadratureNotConverged(const std::string& msg, double best, double err, long evals)
        : Error(msg), best_estimate(best), error_estimate(err), evaluations(evals) {}
    double best_estimate;
    double error_estimate;
    long evaluations;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace casimir
