#include "npart/search.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diff_engine.hpp"

namespace npart {

namespace {

inline std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

// Arithmetic behind the engine. The 128-bit specialization is the fast
// path for instances whose total fits with headroom; results are
// bit-identical to the wide path.
template <class V>
struct Ops;

template <>
struct Ops<u128> {
  static u128 from_mag(const Magnitude& m) { return m.to_u128(); }
  static Magnitude to_mag(u128 v) { return Magnitude::from_u128(v); }
  static u128 add(u128 a, u128 b) { return a + b; }
  static u128 sub(u128 a, u128 b) { return a - b; }
  static bool le_one(u128 v) { return v <= 1; }
  static bool value_prune(u128 vmax, u128 vsum, u128 best) {
    u128 twice = vmax << 1;
    return twice >= vsum && twice - vsum >= best;
  }
};

template <>
struct Ops<Magnitude> {
  static Magnitude from_mag(const Magnitude& m) { return m; }
  static Magnitude to_mag(const Magnitude& m) { return m; }
  static Magnitude add(const Magnitude& a, const Magnitude& b) { return a + b; }
  static Magnitude sub(const Magnitude& a, const Magnitude& b) { return a - b; }
  static bool le_one(const Magnitude& v) { return v <= Magnitude(1); }
  static bool value_prune(const Magnitude& vmax, const Magnitude& vsum,
                          const Magnitude& best) {
    Magnitude::Rep twice = vmax.rep() << 1;
    if (twice < vsum.rep()) return false;
    twice -= vsum.rep();
    return twice >= best.rep();
  }
};

enum class StopKind { None, Perfect, NodeBudget, TimeBudget };

template <class V>
class Engine {
 public:
  Engine(const Instance& instance, TreeKind kind, std::int64_t target,
         const SearchLimits& limits, const EventSink& sink,
         const SolveOptions& options)
      : inst_(instance),
        kind_(kind),
        target_(target),
        limits_(limits),
        sink_(sink),
        opts_(options),
        n_(instance.n()),
        half_(kind == TreeKind::Cbldm ? (instance.n() + 1) / 2
                                      : instance.n()) {}

  SolveReport run() {
    start_ = std::chrono::steady_clock::now();
    init_root();
    nodes_ = 1;  // the root list counts as one node
    std::vector<OpRec> stack;
    stack.reserve(n_ + 1);
    if (over_node_budget()) {
      stop_ = StopKind::NodeBudget;
    } else if (visit(nullptr)) {
      stack.push_back({});
    }
    while (!stack.empty() && stop_ == StopKind::None) {
      const std::size_t fi = stack.size() - 1;
      switch (stack[fi].next) {
        case 0:  // left branch: difference
          stack[fi].next = 1;
          apply(stack[fi], false);
          if (child_visit(stack[fi])) stack.push_back({});
          break;
        case 1:  // right branch: sum
          undo(stack[fi]);
          stack[fi].next = 2;
          apply(stack[fi], true);
          if (child_visit(stack[fi])) stack.push_back({});
          break;
        default:
          undo(stack[fi]);
          stack.pop_back();
          break;
      }
    }
    return build_report();
  }

 private:
  struct Elem {
    V value{};
    std::int32_t card = 0;
    std::uint32_t rank = 0;
  };

  struct OpRec {
    Elem a, b;               // the pair removed from the front
    std::uint32_t pos = 0;   // where the combined element was inserted
    V saved_vmax{};
    std::int32_t saved_mmax = 0;
    bool pdm_op = false;
    bool child_sorted = false;
    std::uint8_t next = 0;  // 0 diff pending, 1 sum pending, 2 done
  };

  void init_root() {
    std::vector<std::uint32_t> order(n_);
    for (std::uint32_t i = 0; i < n_; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return inst_.weight(b) < inst_.weight(a);
                     });
    list_.clear();
    list_.reserve(n_);
    vsum_ = V{};
    for (std::uint32_t i = 0; i < n_; ++i) {
      Elem e;
      e.value = Ops<V>::from_mag(inst_.weight(order[i]));
      e.card = 1;
      e.rank = i;
      vsum_ = Ops<V>::add(vsum_, e.value);
      list_.push_back(std::move(e));
    }
    vmax_ = list_.front().value;
    msum_ = static_cast<std::int64_t>(n_);
    mmax_ = 1;
    path_.clear();
  }

  bool over_node_budget() const {
    return limits_.max_nodes && nodes_ > *limits_.max_nodes;
  }

  std::chrono::nanoseconds elapsed() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - start_);
  }

  bool child_visit(OpRec& creator) {
    ++nodes_;
    if (over_node_budget()) {
      stop_ = StopKind::NodeBudget;
      return false;
    }
    if (limits_.max_time && (nodes_ & 0xFF) == 0 &&
        elapsed() > *limits_.max_time) {
      stop_ = StopKind::TimeBudget;
      return false;
    }
    return visit(&creator);
  }

  // Terminal handling, pruning, and the one-time sort when a path
  // crosses into the LDM phase. Returns true when the node expands.
  bool visit(OpRec* creator) {
    const std::size_t k = list_.size();
#ifndef NDEBUG
    debug_check_caches();
#endif
    if (k == 1) {
      on_terminal();
      return false;
    }
    if (opts_.use_value_prune && have_best_ &&
        Ops<V>::value_prune(current_vmax(k), vsum_, best_v_)) {
      return false;
    }
    if (kind_ == TreeKind::Cbldm && opts_.use_cardinality_prune &&
        (2 * static_cast<std::int64_t>(mmax_) - msum_ > target_ ||
         msum_ < target_)) {
      return false;
    }
    if (kind_ == TreeKind::Cbldm && k == half_ && creator != nullptr) {
      // Entering the LDM phase: sort once; insertion keeps the order
      // from here down. The pre-sort order is restored on backtrack.
      presort_ = list_;
      creator->child_sorted = true;
      std::sort(list_.begin(), list_.end(), [](const Elem& a, const Elem& b) {
        auto cmp = a.value <=> b.value;
        if (cmp != 0) return cmp > 0;
        return a.rank < b.rank;
      });
    }
    return true;
  }

  // In the sorted regime the front element is the maximum; vmax_ is
  // maintained incrementally only across PDM-phase appends.
  const V& current_vmax(std::size_t k) const {
    if (kind_ == TreeKind::Cbldm && k >= half_) return vmax_;
    return list_.front().value;
  }

  void on_terminal() {
    const Elem& t = list_.front();
    if (kind_ == TreeKind::Cbldm &&
        iabs(static_cast<std::int64_t>(t.card)) != target_) {
      return;
    }
    if (have_best_ && !(t.value < best_v_)) return;
    have_best_ = true;
    best_v_ = t.value;

    ImprovementEvent ev;
    ev.delta = Ops<V>::to_mag(t.value);
    ev.assignment = extract_assignment(inst_, path_, kind_);
    ev.nodes_at_event = nodes_;
    ev.elapsed_at_event = elapsed();
    if (ev.assignment.delta != ev.delta ||
        iabs(ev.assignment.card_diff) != iabs(t.card)) {
      throw std::logic_error(
          "search: replayed assignment disagrees with the terminal");
    }
    trace_.push_back(std::move(ev));
    if (sink_) sink_(trace_.back());
    if (Ops<V>::le_one(t.value)) stop_ = StopKind::Perfect;
  }

  void apply(OpRec& rec, bool sum_branch) {
    const std::size_t k = list_.size();
    rec.a = std::move(list_[0]);
    rec.b = std::move(list_[1]);
    rec.child_sorted = false;
    rec.pdm_op = kind_ == TreeKind::Cbldm && k > half_;
    list_.erase(list_.begin(), list_.begin() + 2);

    Elem comb;
    comb.value = sum_branch ? Ops<V>::add(rec.a.value, rec.b.value)
                            : Ops<V>::sub(rec.a.value, rec.b.value);
    comb.card = sum_branch ? rec.a.card + rec.b.card : rec.a.card - rec.b.card;
    comb.rank = static_cast<std::uint32_t>(n_ + path_.size());

    vsum_ -= rec.a.value;
    vsum_ -= rec.b.value;
    vsum_ += comb.value;

    std::size_t pos;
    if (rec.pdm_op) {
      rec.saved_vmax = vmax_;
      pos = list_.size();
      const V comb_value = comb.value;
      list_.push_back(std::move(comb));
      // The removed pair never exceeds the front originals, so the old
      // max survives unless it was the front itself.
      if (vmax_ > rec.a.value) {
        if (comb_value > vmax_) vmax_ = comb_value;
      } else {
        vmax_ = scan_vmax();
      }
    } else {
      auto it = std::upper_bound(
          list_.begin(), list_.end(), comb.value,
          [](const V& v, const Elem& e) { return e.value < v; });
      pos = static_cast<std::size_t>(it - list_.begin());
      list_.insert(it, std::move(comb));
    }
    rec.pos = static_cast<std::uint32_t>(pos);

    if (kind_ == TreeKind::Cbldm) {
      rec.saved_mmax = mmax_;
      const std::int32_t comb_abs =
          static_cast<std::int32_t>(iabs(list_[pos].card));
      const std::int32_t ab_max = static_cast<std::int32_t>(
          std::max(iabs(rec.a.card), iabs(rec.b.card)));
      msum_ += comb_abs - iabs(rec.a.card) - iabs(rec.b.card);
      if (mmax_ > ab_max) {
        if (comb_abs > mmax_) mmax_ = comb_abs;
      } else {
        mmax_ = scan_mmax();
      }
    }
    path_.push_back(sum_branch ? 1 : 0);
  }

  void undo(OpRec& rec) {
    path_.pop_back();
    if (rec.child_sorted) {
      list_ = presort_;
      rec.child_sorted = false;
    }
    Elem comb = std::move(list_[rec.pos]);
    list_.erase(list_.begin() + rec.pos);

    vsum_ -= comb.value;
    vsum_ += rec.a.value;
    vsum_ += rec.b.value;
    if (kind_ == TreeKind::Cbldm) {
      msum_ += iabs(rec.a.card) + iabs(rec.b.card) - iabs(comb.card);
      mmax_ = rec.saved_mmax;
    }
    if (rec.pdm_op) vmax_ = rec.saved_vmax;

    list_.insert(list_.begin(), 2, Elem{});
    list_[0] = std::move(rec.a);
    list_[1] = std::move(rec.b);
  }

  V scan_vmax() const {
    V best = list_.front().value;
    for (const Elem& e : list_) {
      if (e.value > best) best = e.value;
    }
    return best;
  }

  std::int32_t scan_mmax() const {
    std::int32_t best = 0;
    for (const Elem& e : list_) {
      auto a = static_cast<std::int32_t>(iabs(e.card));
      if (a > best) best = a;
    }
    return best;
  }

#ifndef NDEBUG
  void debug_check_caches() const {
    V s{};
    std::int64_t ms = 0;
    std::int32_t mm = 0;
    for (const Elem& e : list_) {
      s = Ops<V>::add(s, e.value);
      ms += iabs(e.card);
      mm = std::max(mm, static_cast<std::int32_t>(iabs(e.card)));
    }
    assert(s == vsum_);
    assert(current_vmax(list_.size()) == scan_vmax());
    if (kind_ == TreeKind::Cbldm) {
      assert(ms == msum_);
      assert(mm == mmax_);
    }
  }
#endif

  SolveReport build_report() {
    SolveReport report;
    switch (stop_) {
      case StopKind::Perfect: report.status = SolveStatus::PerfectFound; break;
      case StopKind::NodeBudget:
        report.status = SolveStatus::NodeBudgetExhausted;
        break;
      case StopKind::TimeBudget:
        report.status = SolveStatus::TimeBudgetExhausted;
        break;
      case StopKind::None: report.status = SolveStatus::ProvenOptimal; break;
    }
    report.nodes_generated = nodes_;
    report.elapsed = elapsed();
    if (!trace_.empty()) report.best = trace_.back().assignment;
    report.trace = std::move(trace_);
    return report;
  }

  const Instance& inst_;
  TreeKind kind_;
  std::int64_t target_;
  SearchLimits limits_;
  const EventSink& sink_;
  SolveOptions opts_;
  std::size_t n_;
  std::size_t half_;

  std::vector<Elem> list_;
  std::vector<Elem> presort_;
  V vsum_{};
  V vmax_{};
  std::int64_t msum_ = 0;
  std::int32_t mmax_ = 0;
  DecisionPath path_;

  bool have_best_ = false;
  V best_v_{};
  std::vector<ImprovementEvent> trace_;
  std::uint64_t nodes_ = 0;
  StopKind stop_ = StopKind::None;
  std::chrono::steady_clock::time_point start_;
};

SolveReport dispatch(const Instance& instance, TreeKind kind,
                     std::int64_t target, const SearchLimits& limits,
                     const EventSink& sink, const SolveOptions& options) {
  if (instance.n() >= (std::size_t{1} << 31)) {
    throw std::invalid_argument("solver: n too large");
  }
  const Magnitude total = instance.total();
  if (!options.force_wide_arithmetic && total < Magnitude::pow2(126)) {
    return Engine<u128>(instance, kind, target, limits, sink, options).run();
  }
  return Engine<Magnitude>(instance, kind, target, limits, sink, options).run();
}

}  // namespace

SolveReport ckk_solve(const Instance& instance, const SearchLimits& limits,
                      const EventSink& sink, const SolveOptions& options) {
  return dispatch(instance, TreeKind::Ckk, 0, limits, sink, options);
}

SolveReport cbldm_solve(const Instance& instance,
                        const CardinalityConstraint& constraint,
                        const SearchLimits& limits, const EventSink& sink,
                        const SolveOptions& options) {
  if (!constraint.has_target()) {
    throw std::invalid_argument("cbldm_solve: constraint must carry a target");
  }
  constraint.validate_for(instance.n());
  return dispatch(instance, TreeKind::Cbldm, constraint.target(), limits, sink,
                  options);
}

SolveReport solve(const Instance& instance,
                  const CardinalityConstraint& constraint,
                  const SearchLimits& limits, const EventSink& sink,
                  const SolveOptions& options) {
  if (constraint.is_unconstrained()) {
    return ckk_solve(instance, limits, sink, options);
  }
  return cbldm_solve(instance, constraint, limits, sink, options);
}

PartitionAssignment extract_assignment(const Instance& instance,
                                       const DecisionPath& path,
                                       TreeKind kind) {
  if (path.size() != instance.n() - 1) {
    throw std::logic_error(
        "extract_assignment: path length must be n - 1 to reach a terminal");
  }
  detail::ReplayList list(instance, kind);
  for (auto bit : path) list.step(bit != 0);
  return list.finish();
}

NodeState NodeState::make(std::vector<WeightedElement> elements,
                          SearchPhase phase) {
  if (elements.empty()) {
    throw std::invalid_argument("NodeState: element list must be non-empty");
  }
  NodeState state;
  state.elements = std::move(elements);
  state.phase = phase;
  state.value_sum = Magnitude();
  state.value_max = Magnitude();
  state.card_abs_sum = 0;
  state.card_abs_max = 0;
  for (const auto& e : state.elements) {
    state.value_sum += e.value;
    if (e.value > state.value_max) state.value_max = e.value;
    state.card_abs_sum += iabs(e.card);
    state.card_abs_max = std::max(state.card_abs_max, iabs(e.card));
  }
  return state;
}

bool NodeState::caches_consistent() const {
  Magnitude vs, vm;
  std::int64_t cs = 0, cm = 0;
  for (const auto& e : elements) {
    vs += e.value;
    if (e.value > vm) vm = e.value;
    cs += iabs(e.card);
    cm = std::max(cm, iabs(e.card));
  }
  return vs == value_sum && vm == value_max && cs == card_abs_sum &&
         cm == card_abs_max;
}

bool prune_value(const NodeState& state, const Magnitude& best) {
  return Ops<Magnitude>::value_prune(state.value_max, state.value_sum, best);
}

bool prune_cardinality(const NodeState& state, std::int64_t target_abs) {
  return 2 * state.card_abs_max - state.card_abs_sum > target_abs ||
         state.card_abs_sum < target_abs;
}

}  // namespace npart
