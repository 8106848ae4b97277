#pragma once

#include "spchain/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spchain {

// The randomized property suite: per generated shortcut-free SPG it checks the
// decomposition round-trip, merge-set equivalence against the definitions, the
// case identities, the pricing invariants, verifier-clean equilibria, the LCP
// oracle at every SM node, welfare agreement, the component factor, the
// double-utility rules, and (on the first `swap_count` instances with a series
// node) swap invariance of (lambda, X_s, SW, Pi_s).
struct SuiteResult {
    int checked = 0;
    int swaps_checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

SuiteResult run_property_suite(std::uint64_t seed0, int count, int max_nodes, int swap_count);

}  // namespace spchain
