#pragma once

#include <stdexcept>
#include <string>

namespace omg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mixed spaces, non-open sets, out-of-range points.
struct TypeError : Error {
    using Error::Error;
};

// Malformed histories, malformed files, ill-formed selections.
struct ProtocolError : Error {
    using Error::Error;
};

// Enumeration larger than the configured cap. Carries the size estimate.
struct CapError : Error {
    unsigned long long estimate;
    explicit CapError(const std::string& what, unsigned long long est)
        : Error(what), estimate(est) {}
};

// Constructor invariant violated (non-dense family union, bad tree labels, ...).
struct ConstructionError : Error {
    using Error::Error;
};

}  // namespace omg
