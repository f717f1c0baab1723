#pragma once

#include "npart/core.hpp"

namespace npart {

enum class HeuristicKind { Pdm, Ldm, Bldm };

/// Largest differencing method: repeatedly replace the two largest
/// elements by their difference. No cardinality guarantee.
PartitionAssignment ldm(const Instance& instance);

/// Paired differencing method: difference adjacent pairs of the sorted
/// list, re-sort the survivors, iterate. Always |card_diff| <= 1.
PartitionAssignment pdm(const Instance& instance);

/// Balanced LDM: one PDM pass down to ceil(n/2) elements, then LDM on
/// the reduced list. Always |card_diff| == n mod 2.
PartitionAssignment bldm(const Instance& instance);

PartitionAssignment run_heuristic(HeuristicKind kind, const Instance& instance);

}  // namespace npart
