#pragma once

#include <stdexcept>
#include <string>

namespace holant {

// Error categories surfaced by the library. The CLI maps them to exit codes.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ResourceExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FailedPrecondition : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The marginal denominator vanished for the chosen boundary fill.
class InfeasibleBoundary : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No configuration of positive weight exists.
class InfeasibleInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace holant
