#pragma once

#include <stdexcept>
#include <string>

namespace ecov {

/// Caller broke a documented precondition (bad dimensions, invalid constants,
/// missing certification, non-symmetric input to a symmetric solver, ...).
class contract_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric procedure could not deliver its postcondition (iteration cap hit,
/// scale range exhausted, bracket lost). Distinct from a contract violation:
/// inputs were legal but the computation failed to certify.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ecov
