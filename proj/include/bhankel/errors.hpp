#pragma once

#include <stdexcept>

namespace bhankel {

/// A computation that was well posed but failed numerically: non-finite
/// values, unresolved oscillation, non-convergent iteration.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bhankel
