#pragma once

#include <stdexcept>
#include <string>

namespace vgr {

/// Bad argument to a library call: wrong dimensions, out-of-range index,
/// invalid configuration value.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed external input (CSV cell, config line). The message carries the
/// file and location.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A metric with no meaningful value, e.g. a normalized error against an
/// all-zero reference.
class UndefinedMetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace vgr
