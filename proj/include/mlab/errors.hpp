#pragma once

/// \file errors.hpp
/// \brief Exception taxonomy shared by every mlab module.
///
/// All throwing code paths use one of the types below and prefix the message
/// with the module that detected the problem ("jacobi: ...", "quad: ...").
/// That convention lets callers (and the CLI selftest) attribute a failure to
/// a module without parsing anything beyond the first token of what().

#include <stdexcept>
#include <string>

namespace mlab {

/// An argument lies outside the mathematical domain of an operation
/// (evaluation point out of range, invalid parameter such as alpha <= -1).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

/// A structurally valid request that violates a documented precondition or
/// resource guardrail (too few quadrature nodes, dimension guard exceeded,
/// unsatisfied hypothesis of a bound).
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// An iterative numerical procedure failed to reach its documented target
/// (root refinement out of budget, indefinite Gram matrix, residual too big).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data admits no valid construction (scale equation has no root,
/// profile data not representable as a convex interpolant).
class construction_error : public std::runtime_error {
public:
    explicit construction_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A regression fit is degenerate or rank deficient.
class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mlab
