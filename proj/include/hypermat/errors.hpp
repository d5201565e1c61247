#pragma once

#include <stdexcept>
#include <string>

namespace hypermat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A commutation, positive-stability or invertibility hypothesis of the
/// requested function does not hold. `hypothesis()` names it, e.g. "CB = BC".
class HypothesisError : public Error {
public:
    HypothesisError(std::string hypothesis, const std::string& detail)
        : Error("hypothesis violated: " + hypothesis + (detail.empty() ? "" : " (" + detail + ")")),
          hypothesis_(std::move(hypothesis)) {}

    const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
    std::string hypothesis_;
};

/// Malformed input: wrong shape, non-finite entries, argument outside a guard region.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative numerics failed to reach tolerance. Carries the last error estimate.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double estimate)
        : Error(what + " (last error estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

} // namespace hypermat
