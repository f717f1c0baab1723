#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "npart/core.hpp"

namespace npart {

struct SearchLimits {
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::nanoseconds> max_time;

  static SearchLimits unbounded() { return {}; }
  static SearchLimits nodes(std::uint64_t n) { return {n, std::nullopt}; }
};

struct SolveOptions {
  bool use_value_prune = true;
  bool use_cardinality_prune = true;
  /// Test hook: skip the 128-bit fast path even when the totals fit.
  /// Results are identical either way.
  bool force_wide_arithmetic = false;
};

/// Which differencing tree a decision path belongs to: CKK keeps the
/// list sorted from the root; CBLDM runs a positional PDM phase first.
enum class TreeKind { Ckk, Cbldm };

/// Branch bits from the root: 0 = difference (opposite subsets),
/// 1 = sum (same subset). A terminal path has n - 1 bits.
using DecisionPath = std::vector<std::uint8_t>;

using EventSink = std::function<void(const ImprovementEvent&)>;

/// Complete Karmarkar-Karp: depth-first, left-to-right search of the
/// differencing tree for the unconstrained problem. Anytime: the first
/// improvement event is the LDM solution after exactly n nodes.
SolveReport ckk_solve(const Instance& instance,
                      const SearchLimits& limits = SearchLimits::unbounded(),
                      const EventSink& sink = {},
                      const SolveOptions& options = {});

/// Complete BLDM: the constrained solver. Terminals are accepted only
/// when |m| equals the target; the first accepted terminal is the BLDM
/// solution. The constraint must carry a parity-valid target.
SolveReport cbldm_solve(const Instance& instance,
                        const CardinalityConstraint& constraint,
                        const SearchLimits& limits = SearchLimits::unbounded(),
                        const EventSink& sink = {},
                        const SolveOptions& options = {});

/// Dispatch on the constraint: unconstrained -> ckk, target -> cbldm.
SolveReport solve(const Instance& instance,
                  const CardinalityConstraint& constraint,
                  const SearchLimits& limits = SearchLimits::unbounded(),
                  const EventSink& sink = {},
                  const SolveOptions& options = {});

/// Replays a root-to-terminal decision path with the solver's exact
/// ordering rules and returns the realized two-coloring. The path must
/// have n - 1 bits; anything else is an internal consistency error.
PartitionAssignment extract_assignment(const Instance& instance,
                                       const DecisionPath& path,
                                       TreeKind kind);

enum class SearchPhase { Pdm, Ldm };

/// A search node: the element list plus cached aggregates the pruning
/// rules consume. The caches must always equal the recomputed values.
struct NodeState {
  std::vector<WeightedElement> elements;
  Magnitude value_sum;
  Magnitude value_max;
  std::int64_t card_abs_sum = 0;
  std::int64_t card_abs_max = 0;
  SearchPhase phase = SearchPhase::Ldm;

  static NodeState make(std::vector<WeightedElement> elements,
                        SearchPhase phase = SearchPhase::Ldm);
  bool caches_consistent() const;
};

/// Value rule: the subtree cannot beat `best` once
/// 2 * max value - sum of values >= best.
bool prune_value(const NodeState& state, const Magnitude& best);

/// Cardinality rule: with M = sum |m_i| and m_max = max |m_i|, the
/// reachable |m| lie in [max(0, 2 * m_max - M), M]; prune when the
/// target falls outside.
bool prune_cardinality(const NodeState& state, std::int64_t target_abs);

}  // namespace npart
