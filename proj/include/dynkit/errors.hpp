#ifndef DYNKIT_ERRORS_HPP
#define DYNKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dynkit {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
    using Error::Error;
};

// Non-finite input, value outside a function's real domain, unbound variable.
struct DomainError : Error {
    using Error::Error;
};

// No section crossing found within the search horizon.
struct RecurrenceError : Error {
    using Error::Error;
};

// Bad catalog name, bad parameter, malformed config document.
struct ConfigError : Error {
    using Error::Error;
};

// A checker precondition failed (section not preserved, gate check failed).
struct PreconditionError : Error {
    using Error::Error;
};

} // namespace dynkit

#endif
