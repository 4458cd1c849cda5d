#pragma once

#include <stdexcept>
#include <string>

namespace maxmargin {

// Bad caller input: shapes, ranges, malformed specs.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation exists but is not defined for this kind of object.
class UnsupportedKind : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Something computed came out inconsistent (non-finite loss, broken table).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace maxmargin
