#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fiipnn {

/// Input data violates a structural constraint (shape, bound order, parameter range).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A spec document could not be parsed.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or failed a precondition that
/// depends on numeric results (e.g. a failing certificate).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::size_t step = npos)
        : std::runtime_error(what), step_(step) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Integration step at which the failure occurred, or npos.
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace fiipnn
