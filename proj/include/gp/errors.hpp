#pragma once

#include <stdexcept>
#include <string>

namespace gp {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument / precondition violation (t < 0, M = 0, J too large, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Evaluation point sits on or near a pole of K.
class PoleProximityError : public Error {
public:
    using Error::Error;
};

// A certifying sign change was absent in a root bracket.
class BracketError : public Error {
public:
    using Error::Error;
};

// No admissible truncation index N for the rectangle contour exists within
// the stored kernel prefix (slowly increasing decay rates).
class GapConditionError : public Error {
public:
    using Error::Error;
};

// Winding-number computation failed: a phase jump persisted at the
// subdivision depth limit, or the rounded total missed an integer.
class WindingError : public Error {
public:
    using Error::Error;
};

// A boundary sample violated |K(z)| < |z|/n^2 on the contour.
class RoucheError : public Error {
public:
    using Error::Error;
};

// The localization box contained no zero at the configured depth.
class RootNotFoundError : public Error {
public:
    using Error::Error;
};

// Adaptive integrator step-size underflow; carries the failure time.
class IntegratorError : public Error {
public:
    IntegratorError(const std::string& what, double t_fail)
        : Error(what), t_fail_(t_fail) {}
    double t_fail() const { return t_fail_; }

private:
    double t_fail_;
};

// Run-configuration file is malformed or violates the schema.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace gp
