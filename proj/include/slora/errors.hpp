#pragma once

#include <stdexcept>
#include <string>

namespace slora {

// Invalid or contradictory configuration (bad radio params, unknown scenario
// keys, slot shorter than the exchange it must hold, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Radio parameter combination with no defined airtime (sf <= 2*de).
struct DegenerateConfigError : ConfigError {
    explicit DegenerateConfigError(const std::string& msg) : ConfigError(msg) {}
};

// A clock was asked to read a time earlier than its last synchronization.
struct TimeReversalError : std::logic_error {
    explicit TimeReversalError(const std::string& msg) : std::logic_error(msg) {}
};

// Negative elapsed time handed to drift accumulation.
struct NegativeElapsedError : std::logic_error {
    explicit NegativeElapsedError(const std::string& msg) : std::logic_error(msg) {}
};

// Statistics requested over an empty sample set.
struct EmptySamplesError : std::logic_error {
    explicit EmptySamplesError(const std::string& msg) : std::logic_error(msg) {}
};

// A MAC state machine was fed an event it cannot accept in its current state.
struct IllegalTransitionError : std::logic_error {
    explicit IllegalTransitionError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace slora
