#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "npart/magnitude.hpp"

namespace npart {

/// Thrown when a cardinality target cannot be met for parity reasons
/// (t and n must have the same parity, and t <= n).
class parity_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a budget expires before the requested result exists
/// (e.g. a sweep run stopped before optimality was proven).
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceMeta {
  unsigned bit_width = 0;
  std::uint64_t seed = 0;
  std::string source;
};

/// The input list x_1..x_n of non-negative integer weights.
class Instance {
 public:
  explicit Instance(std::vector<Magnitude> weights,
                    std::optional<InstanceMeta> meta = std::nullopt)
      : weights_(std::move(weights)), meta_(std::move(meta)) {
    if (weights_.empty()) {
      throw std::invalid_argument("Instance: weight list must be non-empty");
    }
  }

  std::size_t n() const { return weights_.size(); }
  const std::vector<Magnitude>& weights() const { return weights_; }
  const Magnitude& weight(std::size_t i) const { return weights_[i]; }
  const std::optional<InstanceMeta>& meta() const { return meta_; }

  Magnitude total() const {
    Magnitude t;
    for (const auto& w : weights_) t += w;
    return t;
  }

 private:
  std::vector<Magnitude> weights_;
  std::optional<InstanceMeta> meta_;
};

/// A (value, effective cardinality) pair; fresh lists built from an
/// instance have every card == 1.
struct WeightedElement {
  Magnitude value;
  std::int64_t card = 1;
};

/// Constraint on the cardinality difference m = 2|A| - n: either none,
/// or |m| equal to a fixed non-negative target.
class CardinalityConstraint {
 public:
  static CardinalityConstraint unconstrained() { return CardinalityConstraint{}; }

  static CardinalityConstraint target_abs(std::int64_t t) {
    if (t < 0) throw std::invalid_argument("cardinality target must be >= 0");
    CardinalityConstraint c;
    c.target_ = t;
    return c;
  }

  /// TargetAbs(n mod 2): the balanced problem |m| <= 1.
  static CardinalityConstraint balanced_for(std::size_t n) {
    return target_abs(static_cast<std::int64_t>(n % 2));
  }

  bool is_unconstrained() const { return !target_.has_value(); }
  bool has_target() const { return target_.has_value(); }
  std::int64_t target() const { return *target_; }

  /// A target is satisfiable only when t <= n and t == n (mod 2); every
  /// terminal cardinality difference has the parity of n.
  void validate_for(std::size_t n) const {
    if (!target_) return;
    auto sn = static_cast<std::int64_t>(n);
    if (*target_ > sn) {
      throw std::invalid_argument("cardinality target exceeds n");
    }
    if ((*target_ & 1) != (sn & 1)) {
      throw parity_error("cardinality target parity does not match n");
    }
  }

  friend bool operator==(const CardinalityConstraint&,
                         const CardinalityConstraint&) = default;

 private:
  std::optional<std::int64_t> target_;
};

/// One sign per original index; +1 puts the element in subset A.
/// delta = |sum_i signs_i * x_i|, card_diff = sum_i signs_i.
struct PartitionAssignment {
  std::vector<std::int8_t> signs;
  Magnitude delta;
  std::int64_t card_diff = 0;
};

/// Computes delta and card_diff for a full sign vector.
PartitionAssignment evaluate(const Instance& instance,
                             const std::vector<std::int8_t>& signs);

struct TotalParity {
  Magnitude total;
  bool odd = false;
};

/// Sum of all weights and its parity; the minimal achievable delta has
/// this parity.
TotalParity total_and_parity(const Instance& instance);

/// "+-+..." rendering of a sign vector.
std::string sign_string(const std::vector<std::int8_t>& signs);

enum class SolveStatus {
  ProvenOptimal,
  PerfectFound,
  NodeBudgetExhausted,
  TimeBudgetExhausted,
};

const char* to_string(SolveStatus status);

struct ImprovementEvent {
  Magnitude delta;
  PartitionAssignment assignment;
  std::uint64_t nodes_at_event = 0;
  std::chrono::nanoseconds elapsed_at_event{0};
};

/// Result of a solver run: the incumbent, how the run ended, the node
/// count, and the full anytime improvement trace.
struct SolveReport {
  std::optional<PartitionAssignment> best;
  SolveStatus status = SolveStatus::ProvenOptimal;
  std::uint64_t nodes_generated = 0;
  std::chrono::nanoseconds elapsed{0};
  std::vector<ImprovementEvent> trace;

  /// PerfectFound proves optimality as well: terminal parity is forced,
  /// so delta <= 1 cannot be improved.
  bool proven_optimal() const {
    return status == SolveStatus::ProvenOptimal ||
           status == SolveStatus::PerfectFound;
  }
};

// --- instance text format -------------------------------------------------
// One non-negative decimal integer per line, LF-terminated; lines starting
// with '#' are comments; blank lines are ignored; n is inferred.

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& instance);
void write_instance_file(const std::string& path, const Instance& instance);

}  // namespace npart
