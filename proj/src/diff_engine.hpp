#pragma once

// Internal differencing machinery shared by the heuristics and by
// decision-path replay. Element ids double as tie-break ranks: ids
// 0..n-1 are the descending-sorted positions of the original weights,
// and every combined element gets the next id, so the strict order
// (value desc, id asc) reproduces "stable sort + insert after equals"
// exactly.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "npart/core.hpp"
#include "npart/search.hpp"

namespace npart::detail {

/// Lazy two-coloring of the original indices. A differencing merge
/// keeps the winner's subtree and flips the loser's; a sum merge keeps
/// both. Signs are resolved once, at the end, by one traversal.
class MergeForest {
 public:
  explicit MergeForest(std::size_t leaves) : leaves_(leaves) {
    nodes_.reserve(leaves);
  }

  std::int32_t leaf(std::size_t original_index) const {
    return static_cast<std::int32_t>(original_index);
  }

  std::int32_t merge(std::int32_t keep, std::int32_t other, bool flip_other) {
    nodes_.push_back({keep, other, flip_other});
    return static_cast<std::int32_t>(leaves_ + nodes_.size() - 1);
  }

  std::vector<std::int8_t> signs(std::int32_t root) const {
    std::vector<std::int8_t> out(leaves_, 0);
    std::vector<std::pair<std::int32_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [id, flipped] = stack.back();
      stack.pop_back();
      if (id < static_cast<std::int32_t>(leaves_)) {
        out[static_cast<std::size_t>(id)] = flipped ? -1 : 1;
        continue;
      }
      const Node& node = nodes_[static_cast<std::size_t>(id) - leaves_];
      stack.push_back({node.keep, flipped});
      stack.push_back({node.other, flipped != node.flip_other});
    }
    return out;
  }

 private:
  struct Node {
    std::int32_t keep;
    std::int32_t other;
    bool flip_other;
  };
  std::size_t leaves_;
  std::vector<Node> nodes_;
};

/// Forward-only differencing state over a CKK or CBLDM tree. Each
/// step consumes the current front pair (positional during the CBLDM
/// PDM phase, largest-first afterwards) and appends the combined
/// element. Used to run LDM/BLDM and to replay solver decision paths.
class ReplayList {
 public:
  ReplayList(const Instance& instance, TreeKind kind)
      : instance_(&instance),
        kind_(kind),
        n_(instance.n()),
        half_((instance.n() + 1) / 2),
        forest_(instance.n()) {
    values_.reserve(2 * n_);
    cards_.reserve(2 * n_);
    forest_id_.reserve(2 * n_);

    // Descending stable sort of the original weights; element id ==
    // sorted position == tie-break rank.
    std::vector<std::uint32_t> order(n_);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return instance.weight(b) < instance.weight(a);
                     });
    for (std::uint32_t original : order) {
      values_.push_back(instance.weight(original));
      cards_.push_back(1);
      forest_id_.push_back(forest_.leaf(original));
    }

    if (kind_ == TreeKind::Ckk) {
      for (std::uint32_t id = 0; id < n_; ++id) heap_push(id);
      in_heap_ = true;
    } else {
      for (std::uint32_t id = 0; id < n_; ++id) pdm_.push_back(id);
      in_heap_ = false;
      maybe_switch();
    }
  }

  std::size_t size() const {
    return in_heap_ ? heap_.size() : pdm_.size();
  }

  void step(bool sum_branch) {
    if (size() <= 1) {
      throw std::logic_error("ReplayList: step past the terminal node");
    }
    std::uint32_t a, b;
    if (in_heap_) {
      a = heap_pop();
      b = heap_pop();
    } else {
      a = pdm_.front();
      pdm_.pop_front();
      b = pdm_.front();
      pdm_.pop_front();
    }
    // a precedes b in the order, so values_[a] >= values_[b].
    auto id = static_cast<std::uint32_t>(values_.size());
    values_.push_back(sum_branch ? values_[a] + values_[b]
                                 : values_[a] - values_[b]);
    cards_.push_back(sum_branch ? cards_[a] + cards_[b]
                                : cards_[a] - cards_[b]);
    forest_id_.push_back(forest_.merge(forest_id_[a], forest_id_[b],
                                       /*flip_other=*/!sum_branch));
    if (in_heap_) {
      heap_push(id);
    } else {
      pdm_.push_back(id);
      maybe_switch();
    }
  }

  /// Value and cardinality of the surviving element (size() must be 1).
  WeightedElement terminal() const {
    std::uint32_t id = only_id();
    return {values_[id], cards_[id]};
  }

  /// Builds the assignment of the surviving element and cross-checks it
  /// against the differencing result.
  PartitionAssignment finish() const {
    std::uint32_t id = only_id();
    PartitionAssignment out =
        evaluate(*instance_, forest_.signs(forest_id_[id]));
    if (out.delta != values_[id] ||
        std::abs(out.card_diff) != std::abs(cards_[id])) {
      throw std::logic_error(
          "ReplayList: sign extraction disagrees with the differencing value");
    }
    return out;
  }

 private:
  std::uint32_t only_id() const {
    if (size() != 1) {
      throw std::logic_error("ReplayList: not at a terminal node");
    }
    return in_heap_ ? heap_[0] : pdm_.front();
  }

  // (value desc, id asc) max-heap over element ids.
  bool heap_before(std::uint32_t a, std::uint32_t b) const {
    auto cmp = values_[a] <=> values_[b];
    if (cmp != 0) return cmp > 0;
    return a < b;
  }

  void heap_push(std::uint32_t id) {
    heap_.push_back(id);
    std::size_t i = heap_.size() - 1;
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!heap_before(heap_[i], heap_[parent])) break;
      std::swap(heap_[i], heap_[parent]);
      i = parent;
    }
  }

  std::uint32_t heap_pop() {
    std::uint32_t top = heap_[0];
    heap_[0] = heap_.back();
    heap_.pop_back();
    std::size_t i = 0;
    while (true) {
      std::size_t l = 2 * i + 1, r = l + 1, best = i;
      if (l < heap_.size() && heap_before(heap_[l], heap_[best])) best = l;
      if (r < heap_.size() && heap_before(heap_[r], heap_[best])) best = r;
      if (best == i) break;
      std::swap(heap_[i], heap_[best]);
      i = best;
    }
    return top;
  }

  void maybe_switch() {
    if (in_heap_ || pdm_.size() > half_) return;
    // Entering the LDM phase: from here on the list is kept in
    // (value desc, id asc) order.
    for (std::uint32_t id : pdm_) heap_push(id);
    pdm_.clear();
    in_heap_ = true;
  }

  const Instance* instance_;
  TreeKind kind_;
  std::size_t n_;
  std::size_t half_;
  MergeForest forest_;
  std::vector<Magnitude> values_;
  std::vector<std::int64_t> cards_;
  std::vector<std::int32_t> forest_id_;
  std::deque<std::uint32_t> pdm_;
  std::vector<std::uint32_t> heap_;
  bool in_heap_ = false;
};

}  // namespace npart::detail
