#pragma once

#include <stdexcept>
#include <string>

namespace qcurv {

/// Mixing reduced and unreduced tables, or feeding the empty-space
/// sentinel to an operation that has no convention for it.
struct flag_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Missing or inconsistent externally supplied data (table files,
/// provider gaps, malformed documents).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A nondegeneracy hypothesis is violated by the input.
struct nd_violation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace qcurv
