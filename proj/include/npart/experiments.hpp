#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "npart/core.hpp"
#include "npart/search.hpp"

namespace npart::experiments {

/// Identity of the instance generator; part of the interchange
/// contract so experiments replicate across implementations.
inline constexpr const char* kGeneratorId = "splitmix64-v1";

/// splitmix64 over an incrementing state; the reference stream for all
/// generated instances.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// Per-instance seed derived from (base_seed, n, index) so table rows
/// are decoupled: sm(sm(sm(base) ^ a) ^ b).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t a,
                          std::uint64_t b);

/// n i.i.d. uniform b-bit integers; identical (b, n, seed) yields the
/// identical instance on every platform.
Instance gen_instance(unsigned bits, std::size_t n, std::uint64_t seed);

enum class SolveMode { Ckk, Cbldm };

/// Target rule for constrained sweeps: balanced (t = n mod 2) or a
/// fixed t applied to every n.
struct TargetRule {
  bool balanced = true;
  std::int64_t fixed_t = 0;

  static TargetRule balanced_rule() { return {true, 0}; }
  static TargetRule fixed(std::int64_t t) { return {false, t}; }
  CardinalityConstraint constraint_for(std::size_t n) const {
    return balanced ? CardinalityConstraint::balanced_for(n)
                    : CardinalityConstraint::target_abs(fixed_t);
  }
};

struct SweepConfig {
  unsigned bits = 15;
  std::vector<std::size_t> n_values;
  std::size_t instances_per_n = 100;
  SolveMode mode = SolveMode::Cbldm;
  TargetRule target = TargetRule::balanced_rule();
  SearchLimits limits;
  std::uint64_t base_seed = 1;
};

struct SweepRow {
  std::size_t n = 0;
  double mean_nodes = 0.0;
  double median_nodes = 0.0;
  double fraction_perfect = 0.0;
  std::string mean_delta;  // exact rational, 12 significant digits
};

/// Runs the configured solver to proven optimality on instances_per_n
/// seeded instances per n. Rows are deterministic for a fixed config;
/// `workers` only parallelizes the independent runs.
std::vector<SweepRow> phase_sweep(const SweepConfig& config,
                                  unsigned workers = 1);

struct ScalingRow {
  std::size_t n = 0;
  double mean_norm_delta = 0.0;
  std::string mean_norm_delta_str;
};

/// BLDM on `trials` instances of n uniform 2n-bit integers per n;
/// deltas are normalized by 2^(2n) to simulate weights in [0,1).
std::vector<ScalingRow> bldm_scaling(const std::vector<std::size_t>& n_values,
                                     std::size_t trials,
                                     std::uint64_t base_seed);

struct TracePoint {
  std::uint64_t nodes = 0;
  double ratio = 1.0;  // first BLDM delta / best delta so far
};

/// Runs cbldm and converts its improvement trace into
/// (nodes, delta_BLDM / delta_best) points.
std::vector<TracePoint> anytime_trace(const Instance& instance,
                                      const CardinalityConstraint& constraint,
                                      const SearchLimits& limits);

struct PowerLawFit {
  double coefficient = 0.0;  // a in  ratio ~ a * nodes^c
  double exponent = 0.0;     // c
};

/// Ordinary least squares on log(ratio) vs log(nodes). Needs at least
/// two points with distinct node counts; nodes >= 1 and ratio > 0.
PowerLawFit fit_power_law(const std::vector<TracePoint>& points);

/// Exact decimal rendering of numerator/denominator with `sig_digits`
/// significant digits ("1.29700000000e-06"; "0" for a zero numerator).
std::string decimal_ratio(const Magnitude& numerator,
                          const Magnitude& denominator, int sig_digits = 12);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& points);

}  // namespace npart::experiments
