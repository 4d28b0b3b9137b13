#pragma once

#include <stdexcept>

namespace onomastat {

// Base for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data: unreadable files, malformed rows, unknown enum tokens,
// names missing from a reference. The CLI maps this to exit code 2.
struct InputError : Error {
    using Error::Error;
};

// Infeasible or out-of-domain configuration: impossible binning, parameter
// values outside their domain. The CLI maps this to exit code 3.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace onomastat
