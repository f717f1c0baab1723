#include "npart/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <mutex>
#include <thread>

#include "npart/heuristics.hpp"

namespace npart::experiments {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t a,
                          std::uint64_t b) {
  SplitMix64 g1(base_seed);
  SplitMix64 g2(g1.next() ^ a);
  SplitMix64 g3(g2.next() ^ b);
  return g3.next();
}

Instance gen_instance(unsigned bits, std::size_t n, std::uint64_t seed) {
  if (bits == 0) throw std::invalid_argument("gen_instance: bits must be >= 1");
  if (n == 0) throw std::invalid_argument("gen_instance: n must be >= 1");
  SplitMix64 gen(seed);
  const unsigned words = (bits + 63) / 64;
  const unsigned top_bits = bits % 64;
  const std::uint64_t top_mask =
      top_bits == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);

  std::vector<Magnitude> weights;
  weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Least-significant word first; the top word is masked to b bits.
    Magnitude::Rep rep = 0;
    for (unsigned w = 0; w < words; ++w) {
      std::uint64_t word = gen.next();
      if (w + 1 == words) word &= top_mask;
      rep |= Magnitude::Rep(word) << (64 * w);
    }
    weights.push_back(Magnitude(std::move(rep)));
  }
  InstanceMeta meta;
  meta.bit_width = bits;
  meta.seed = seed;
  meta.source = kGeneratorId;
  return Instance(std::move(weights), meta);
}

namespace {

// Runs fn(0..jobs-1) on `workers` threads; any exception is rethrown.
void parallel_for(std::size_t jobs, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || jobs <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> threads;
  const unsigned count = std::min<std::size_t>(workers, jobs);
  threads.reserve(count);
  for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

double median_of(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return static_cast<double>(values[m]);
  return 0.5 * (static_cast<double>(values[m - 1]) +
                static_cast<double>(values[m]));
}

}  // namespace

std::vector<SweepRow> phase_sweep(const SweepConfig& config, unsigned workers) {
  if (config.n_values.empty()) {
    throw std::invalid_argument("phase_sweep: n_values must be non-empty");
  }
  if (config.instances_per_n == 0) {
    throw std::invalid_argument("phase_sweep: instances_per_n must be >= 1");
  }
  struct RunResult {
    std::uint64_t nodes = 0;
    Magnitude delta;
    bool perfect = false;
  };
  const std::size_t per = config.instances_per_n;
  std::vector<RunResult> results(config.n_values.size() * per);

  parallel_for(results.size(), workers, [&](std::size_t job) {
    const std::size_t row = job / per;
    const std::size_t idx = job % per;
    const std::size_t n = config.n_values[row];
    const Instance inst = gen_instance(
        config.bits, n, derive_seed(config.base_seed, n, idx));
    SolveReport report;
    if (config.mode == SolveMode::Ckk) {
      report = ckk_solve(inst, config.limits);
    } else {
      report = cbldm_solve(inst, config.target.constraint_for(n),
                           config.limits);
    }
    if (!report.proven_optimal()) {
      throw budget_error(
          "phase_sweep: budget exhausted before optimality was proven");
    }
    RunResult& r = results[job];
    r.nodes = report.nodes_generated;
    r.delta = report.best->delta;
    r.perfect = r.delta <= Magnitude(1);
  });

  std::vector<SweepRow> rows;
  rows.reserve(config.n_values.size());
  for (std::size_t row = 0; row < config.n_values.size(); ++row) {
    SweepRow out;
    out.n = config.n_values[row];
    std::vector<std::uint64_t> nodes;
    nodes.reserve(per);
    long double node_sum = 0.0L;
    std::size_t perfect = 0;
    Magnitude delta_sum;
    for (std::size_t idx = 0; idx < per; ++idx) {
      const RunResult& r = results[row * per + idx];
      nodes.push_back(r.nodes);
      node_sum += static_cast<long double>(r.nodes);
      if (r.perfect) ++perfect;
      delta_sum += r.delta;
    }
    out.mean_nodes = static_cast<double>(node_sum / static_cast<long double>(per));
    out.median_nodes = median_of(std::move(nodes));
    out.fraction_perfect =
        static_cast<double>(perfect) / static_cast<double>(per);
    out.mean_delta = decimal_ratio(delta_sum, Magnitude(per));
    rows.push_back(std::move(out));
  }
  return rows;
}

std::vector<ScalingRow> bldm_scaling(const std::vector<std::size_t>& n_values,
                                     std::size_t trials,
                                     std::uint64_t base_seed) {
  if (trials == 0) throw std::invalid_argument("bldm_scaling: trials >= 1");
  std::vector<ScalingRow> rows;
  rows.reserve(n_values.size());
  for (std::size_t n : n_values) {
    if (n < 4) throw std::invalid_argument("bldm_scaling: n must be >= 4");
    const auto bits = static_cast<unsigned>(2 * n);
    Magnitude delta_sum;
    for (std::size_t idx = 0; idx < trials; ++idx) {
      const Instance inst =
          gen_instance(bits, n, derive_seed(base_seed, n, idx));
      delta_sum += bldm(inst).delta;
    }
    ScalingRow row;
    row.n = n;
    Magnitude denom = Magnitude::pow2(2 * static_cast<unsigned>(n));
    Magnitude::Rep denom_rep = denom.rep() * trials;
    row.mean_norm_delta = static_cast<double>(
        delta_sum.rep().convert_to<long double>() /
        denom_rep.convert_to<long double>());
    row.mean_norm_delta_str = decimal_ratio(delta_sum, Magnitude(denom_rep));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TracePoint> anytime_trace(const Instance& instance,
                                      const CardinalityConstraint& constraint,
                                      const SearchLimits& limits) {
  const SolveReport report = cbldm_solve(instance, constraint, limits);
  if (report.trace.empty()) {
    throw budget_error(
        "anytime_trace: the budget expired before the first solution");
  }
  const Magnitude& first = report.trace.front().delta;
  std::vector<TracePoint> points;
  points.reserve(report.trace.size());
  for (std::size_t i = 0; i < report.trace.size(); ++i) {
    const auto& ev = report.trace[i];
    TracePoint p;
    p.nodes = ev.nodes_at_event;
    if (i == 0) {
      p.ratio = 1.0;
    } else if (ev.delta.is_zero()) {
      p.ratio = std::numeric_limits<double>::infinity();
    } else {
      p.ratio = static_cast<double>(first.rep().convert_to<long double>() /
                                    ev.delta.rep().convert_to<long double>());
    }
    points.push_back(p);
  }
  return points;
}

PowerLawFit fit_power_law(const std::vector<TracePoint>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("fit_power_law: need at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    if (p.nodes < 1 || !(p.ratio > 0.0) || std::isinf(p.ratio)) {
      throw std::invalid_argument(
          "fit_power_law: points need nodes >= 1 and finite ratio > 0");
    }
    const double x = std::log(static_cast<double>(p.nodes));
    const double y = std::log(p.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto count = static_cast<double>(points.size());
  const double det = count * sxx - sx * sx;
  if (!(det > 0.0)) {
    throw std::invalid_argument(
        "fit_power_law: need at least two distinct node counts");
  }
  PowerLawFit fit;
  fit.exponent = (count * sxy - sx * sy) / det;
  fit.coefficient = std::exp((sy - fit.exponent * sx) / count);
  return fit;
}

std::string decimal_ratio(const Magnitude& numerator,
                          const Magnitude& denominator, int sig_digits) {
  using Rep = Magnitude::Rep;
  if (denominator.is_zero()) {
    throw std::invalid_argument("decimal_ratio: zero denominator");
  }
  if (sig_digits < 1 || sig_digits > 40) {
    throw std::invalid_argument("decimal_ratio: sig_digits out of range");
  }
  if (numerator.is_zero()) return "0";

  const std::string n_str = numerator.rep().str();
  const std::string d_str = denominator.rep().str();
  const auto extra = static_cast<int>(
      d_str.size() > n_str.size() ? d_str.size() - n_str.size() + 1 : 1);
  const int scale = sig_digits + 2 + extra;

  Rep shifted = numerator.rep();
  for (int i = 0; i < scale; ++i) shifted *= 10;
  const Rep q = shifted / denominator.rep();
  std::string digits = q.str();
  int exp10 = static_cast<int>(digits.size()) - 1 - scale;

  // Round half-up to sig_digits digits.
  std::string head = digits.substr(0, static_cast<std::size_t>(sig_digits));
  const bool round_up = digits.size() > head.size() &&
                        digits[head.size()] >= '5';
  if (round_up) {
    int i = static_cast<int>(head.size()) - 1;
    for (; i >= 0; --i) {
      if (head[static_cast<std::size_t>(i)] != '9') {
        ++head[static_cast<std::size_t>(i)];
        break;
      }
      head[static_cast<std::size_t>(i)] = '0';
    }
    if (i < 0) {
      head.insert(head.begin(), '1');
      head.pop_back();
      ++exp10;
    }
  }

  char buf[96];
  std::snprintf(buf, sizeof buf, "%c.%se%+03d", head[0], head.c_str() + 1,
                exp10);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,mean_nodes,median_nodes,fraction_perfect,mean_delta\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.3f,%.1f,%.4f,", r.n, r.mean_nodes,
                  r.median_nodes, r.fraction_perfect);
    out << buf << r.mean_delta << "\n";
  }
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "n,mean_norm_delta\n";
  for (const auto& r : rows) {
    out << r.n << "," << r.mean_norm_delta_str << "\n";
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& points) {
  out << "nodes,ratio\n";
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%llu,%.9g",
                  static_cast<unsigned long long>(p.nodes), p.ratio);
    out << buf << "\n";
  }
}

}  // namespace npart::experiments
