#pragma once

#include <stdexcept>
#include <string>

namespace corrbc {

// Quadrature or iterative refinement gave up; best_estimate is the last value reached.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}
    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

// Input data violates a structural invariant (PSD, orthonormality, dimensions).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleStructureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace corrbc
