#pragma once

#include <stdexcept>
#include <string>

namespace coalgen {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (bad bounds, missing trust pairs, ...).
struct ConfigError : Error {
    using Error::Error;
};

// A generated or loaded record violates referential integrity or a bound.
struct IntegrityError : Error {
    using Error::Error;
};

// Rule-document or config-document text could not be parsed.
// `location` is a JSON-pointer-like path or byte offset rendered into the message.
struct ParseError : Error {
    ParseError(const std::string& message, std::string location_in)
        : Error(location_in.empty() ? message : message + " (at " + location_in + ")"),
          location(std::move(location_in)) {}
    std::string location;
};

// Randomized generation could not make progress (e.g. retry budget exhausted).
struct GenerationError : Error {
    using Error::Error;
};

// Rule evaluation failed in strict mode (e.g. missing attribute).
struct EvalError : Error {
    using Error::Error;
};

// A record cannot be rendered (e.g. a name embedding a single quote).
struct SerializationError : Error {
    using Error::Error;
};

}  // namespace coalgen
