// errors.hpp — exception types separating bad inputs from failed numerical checks

#pragma once

#include <stdexcept>
#include <string>

namespace qtm {

// A computed quantity violated a required numerical bound (residual too large,
// trace drift, degenerate null space, truncation contamination, ...).
// Input validation problems throw std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qtm
