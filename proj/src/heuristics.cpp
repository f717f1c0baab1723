#include "npart/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "diff_engine.hpp"

namespace npart {

PartitionAssignment ldm(const Instance& instance) {
  detail::ReplayList list(instance, TreeKind::Ckk);
  while (list.size() > 1) list.step(/*sum_branch=*/false);
  return list.finish();
}

PartitionAssignment bldm(const Instance& instance) {
  detail::ReplayList list(instance, TreeKind::Cbldm);
  while (list.size() > 1) list.step(/*sum_branch=*/false);
  return list.finish();
}

PartitionAssignment pdm(const Instance& instance) {
  const std::size_t n = instance.n();
  detail::MergeForest forest(n);

  std::vector<Magnitude> values;
  std::vector<std::int64_t> cards;
  std::vector<std::int32_t> forest_id;
  values.reserve(2 * n);
  cards.reserve(2 * n);
  forest_id.reserve(2 * n);

  // Ids are assigned in creation order and break ties, exactly as in
  // the LDM/BLDM machinery.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return instance.weight(b) < instance.weight(a);
                   });
  std::vector<std::uint32_t> round;
  round.reserve(n);
  for (std::uint32_t original : order) {
    auto id = static_cast<std::uint32_t>(values.size());
    values.push_back(instance.weight(original));
    cards.push_back(1);
    forest_id.push_back(forest.leaf(original));
    round.push_back(id);
  }

  while (round.size() > 1) {
    std::sort(round.begin(), round.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                auto cmp = values[a] <=> values[b];
                if (cmp != 0) return cmp > 0;
                return a < b;
              });
    std::vector<std::uint32_t> next;
    next.reserve(round.size() / 2 + 1);
    std::size_t i = 0;
    for (; i + 1 < round.size(); i += 2) {
      std::uint32_t a = round[i], b = round[i + 1];
      auto id = static_cast<std::uint32_t>(values.size());
      values.push_back(values[a] - values[b]);
      cards.push_back(cards[a] - cards[b]);
      forest_id.push_back(forest.merge(forest_id[a], forest_id[b], true));
      next.push_back(id);
    }
    if (i < round.size()) next.push_back(round[i]);  // odd leftover
    round = std::move(next);
  }

  PartitionAssignment out = evaluate(instance, forest.signs(forest_id[round[0]]));
  if (out.delta != values[round[0]]) {
    throw std::logic_error("pdm: sign extraction disagrees with differencing");
  }
  return out;
}

PartitionAssignment run_heuristic(HeuristicKind kind, const Instance& instance) {
  switch (kind) {
    case HeuristicKind::Pdm: return pdm(instance);
    case HeuristicKind::Ldm: return ldm(instance);
    case HeuristicKind::Bldm: return bldm(instance);
  }
  throw std::invalid_argument("unknown heuristic");
}

}  // namespace npart
