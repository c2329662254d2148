#pragma once

#include <stdexcept>
#include <string>

namespace bwp {

// Each category maps to one CLI exit code (see tools/bwp.cpp).

/// Bad input: precondition violation, malformed file, dimension mismatch.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a trustworthy number (ill-conditioned
/// system, integer overflow in exact combinatorics).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A resource limit (population cap, U-statistic population cap) was hit.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bwp
