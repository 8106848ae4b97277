#pragma once

#include <stdexcept>
#include <string>

namespace spchain {

struct spchain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input document or a model-assumption violation in the input.
struct validation_error : spchain_error {
    using spchain_error::spchain_error;
};

// The network is not series-parallel (or the operation requires an SPG).
struct not_series_parallel : spchain_error {
    using spchain_error::spchain_error;
};

// Degenerate or out-of-range parameters for an extension computation.
struct infeasible_error : spchain_error {
    using spchain_error::spchain_error;
};

// A solver invariant failed; indicates a bug, not a user error.
struct internal_error : spchain_error {
    using spchain_error::spchain_error;
};

}  // namespace spchain
