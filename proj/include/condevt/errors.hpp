#pragma once

#include <stdexcept>
#include <string>

namespace condevt {

// Precondition violations throw std::invalid_argument. The types below mark
// failures the CLI has to tell apart when choosing an exit code.

/// Unreadable or malformed input data (missing file, bad cell, bad price).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Likelihood or recursion produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sample carries no information for the requested statistic
/// (zero variance, all-equal order statistics, empty tail).
class DegenerateSample : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Tail index too small for the alpha-root scaling law (alpha <= 2).
class ScalingInapplicable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested probability or quantile lies inside the empirical range where
/// the tail estimators are not meant to be used.
class OutsideTailRegion : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace condevt
