#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "npart/core.hpp"

namespace npart {

struct OracleResult {
  Magnitude delta;
  std::int64_t card_diff = 0;
  PartitionAssignment assignment;
};

/// Exhaustive reference solver: enumerates all sign patterns with
/// signs_1 = +1 fixed, filters by the constraint, and returns the
/// lexicographically-first minimizer of (delta, |card_diff|).
/// Guarded at n <= 30 (cost 2^(n-1)).
OracleResult exhaustive_best(const Instance& instance,
                             const CardinalityConstraint& constraint);

/// Expands the full differencing tree (no pruning, CKK ordering,
/// cardinality bookkeeping) and returns all 2^(n-1) terminal
/// (delta, card_diff) pairs, sorted. Guarded at n <= 20.
std::vector<std::pair<Magnitude, std::int64_t>> enumerate_tree_terminals(
    const Instance& instance);

}  // namespace npart
