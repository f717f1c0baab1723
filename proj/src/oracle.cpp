#include "npart/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace npart {

namespace {

using Rep = Magnitude::Rep;

struct TreeElem {
  Magnitude value;
  std::int64_t card;
  std::uint32_t rank;
};

void expand_terminals(const std::vector<TreeElem>& list, std::size_t n,
                      std::size_t depth,
                      std::vector<std::pair<Magnitude, std::int64_t>>& out) {
  if (list.size() == 1) {
    out.emplace_back(list[0].value, list[0].card);
    return;
  }
  const TreeElem& a = list[0];
  const TreeElem& b = list[1];
  for (bool sum_branch : {false, true}) {
    TreeElem comb;
    comb.value = sum_branch ? a.value + b.value : a.value - b.value;
    comb.card = sum_branch ? a.card + b.card : a.card - b.card;
    comb.rank = static_cast<std::uint32_t>(n + depth);
    std::vector<TreeElem> child(list.begin() + 2, list.end());
    auto it = std::upper_bound(
        child.begin(), child.end(), comb.value,
        [](const Magnitude& v, const TreeElem& e) { return e.value < v; });
    child.insert(it, std::move(comb));
    expand_terminals(child, n, depth + 1, out);
  }
}

}  // namespace

OracleResult exhaustive_best(const Instance& instance,
                             const CardinalityConstraint& constraint) {
  const std::size_t n = instance.n();
  if (n > 30) {
    throw std::invalid_argument(
        "exhaustive_best: refusing n > 30 (cost 2^(n-1))");
  }
  constraint.validate_for(n);

  // Sign pattern for indices 1..n-1 encoded in a mask; index i maps to
  // bit (n-1-i), so ascending masks enumerate sign vectors in
  // lexicographic order with '+' before '-'. signs_1 is fixed to +1.
  std::vector<Rep> twice;
  twice.reserve(n);
  Rep cur = 0;
  for (const auto& w : instance.weights()) {
    cur += w.rep();
    twice.push_back(w.rep() * 2);
  }
  std::int64_t card = static_cast<std::int64_t>(n);
  std::vector<std::int8_t> signs(n, 1);

  bool found = false;
  Rep best_abs;
  std::int64_t best_card_abs = 0;
  std::uint64_t best_mask = 0;

  const std::uint64_t limit =
      n == 1 ? 1 : (std::uint64_t{1} << (n - 1));
  const std::int64_t target = constraint.has_target() ? constraint.target() : -1;

  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if (mask != 0) {
      std::uint64_t changed = mask ^ (mask - 1);
      while (changed != 0) {
        const int bit = std::countr_zero(changed);
        changed &= changed - 1;
        const std::size_t i = n - 1 - static_cast<std::size_t>(bit);
        if (signs[i] > 0) {
          signs[i] = -1;
          cur -= twice[i];
          card -= 2;
        } else {
          signs[i] = 1;
          cur += twice[i];
          card += 2;
        }
      }
    }
    const std::int64_t card_abs = card < 0 ? -card : card;
    if (target >= 0 && card_abs != target) continue;
    Rep delta_abs = boost::multiprecision::abs(cur);
    if (!found || delta_abs < best_abs ||
        (delta_abs == best_abs && card_abs < best_card_abs)) {
      found = true;
      best_abs = std::move(delta_abs);
      best_card_abs = card_abs;
      best_mask = mask;
    }
  }
  if (!found) {
    throw std::logic_error("exhaustive_best: no pattern met the constraint");
  }

  std::vector<std::int8_t> best_signs(n, 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (best_mask >> (n - 1 - i) & 1) best_signs[i] = -1;
  }
  OracleResult result;
  result.assignment = evaluate(instance, best_signs);
  result.delta = result.assignment.delta;
  result.card_diff = result.assignment.card_diff;
  return result;
}

std::vector<std::pair<Magnitude, std::int64_t>> enumerate_tree_terminals(
    const Instance& instance) {
  const std::size_t n = instance.n();
  if (n > 20) {
    throw std::invalid_argument(
        "enumerate_tree_terminals: refusing n > 20 (2^(n-1) terminals)");
  }
  std::vector<TreeElem> root;
  root.reserve(n);
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return instance.weight(b) < instance.weight(a);
                   });
  for (std::uint32_t i = 0; i < n; ++i) {
    root.push_back({instance.weight(order[i]), 1, i});
  }
  std::vector<std::pair<Magnitude, std::int64_t>> out;
  out.reserve(n == 1 ? 1 : (std::size_t{1} << (n - 1)));
  expand_terminals(root, n, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace npart
