// Acceptance suite: end-to-end checks of the solver stack, run as one
// binary that prints a PASS/FAIL line per criterion. Exit code is the
// number of failed criteria.
//
//   npart_acceptance [--only K] [--workers N]

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "npart/core.hpp"
#include "npart/experiments.hpp"
#include "npart/heuristics.hpp"
#include "npart/oracle.hpp"
#include "npart/search.hpp"
#include "npart/theory.hpp"

using namespace npart;
namespace exp_ = npart::experiments;

namespace {

struct Context {
  unsigned workers = 1;
  std::uint64_t events_checked = 0;
  std::uint64_t extraction_failures = 0;
};

Context g_ctx;

// Re-derives delta and card_diff from the event's sign vector; counts
// toward the criterion-8 extraction-consistency tally.
void check_events(const Instance& inst, const SolveReport& report,
                  bool& ok) {
  for (const auto& ev : report.trace) {
    ++g_ctx.events_checked;
    const auto again = evaluate(inst, ev.assignment.signs);
    if (again.delta != ev.delta ||
        again.card_diff != ev.assignment.card_diff ||
        ev.delta != ev.assignment.delta) {
      ++g_ctx.extraction_failures;
      ok = false;
    }
  }
}

// --- criterion 1 -----------------------------------------------------------
// ckk == unconstrained oracle and cbldm == constrained oracle for every
// parity-valid target, over 500 seeded instances, in under two minutes.
bool criterion1(std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const unsigned bit_choices[] = {4, 8, 12, 25};
  bool ok = true;
  std::uint64_t checks = 0;
  for (int i = 0; i < 500 && ok; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i) % 16;
    const unsigned bits = bit_choices[i % 4];
    const auto inst =
        exp_::gen_instance(bits, n, exp_::derive_seed(1001, i, 0));

    const auto ckk = ckk_solve(inst);
    const auto un = exhaustive_best(inst, CardinalityConstraint::unconstrained());
    if (!ckk.proven_optimal() || !ckk.best ||
        ckk.best->delta != un.delta) {
      log << "  instance " << i << ": ckk "
          << (ckk.best ? ckk.best->delta.to_decimal() : "<none>")
          << " != oracle " << un.delta.to_decimal() << "\n";
      ok = false;
      break;
    }
    check_events(inst, ckk, ok);
    ++checks;

    for (std::int64_t t = static_cast<std::int64_t>(n % 2);
         t <= static_cast<std::int64_t>(n); t += 2) {
      const auto constraint = CardinalityConstraint::target_abs(t);
      const auto got = cbldm_solve(inst, constraint);
      const auto want = exhaustive_best(inst, constraint);
      if (!got.proven_optimal() || !got.best || got.best->delta != want.delta ||
          std::abs(got.best->card_diff) != t) {
        log << "  instance " << i << " t=" << t << ": cbldm "
            << (got.best ? got.best->delta.to_decimal() : "<none>")
            << " != oracle " << want.delta.to_decimal() << "\n";
        ok = false;
        break;
      }
      check_events(inst, got, ok);
      ++checks;
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  log << "  " << checks << " solver/oracle comparisons in " << seconds
      << " s\n";
  if (seconds >= 120.0) {
    log << "  runtime bound exceeded (>= 120 s)\n";
    ok = false;
  }
  return ok;
}

// --- criterion 2 -----------------------------------------------------------
// First ckk event: the LDM delta after exactly n nodes. First cbldm
// accepted terminal: the BLDM delta and |card_diff|. 1000 instances.
bool criterion2(std::ostream& log) {
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i) % 64;
    const auto inst =
        exp_::gen_instance(25, n, exp_::derive_seed(1002, i, 0));

    const auto ckk = ckk_solve(inst, SearchLimits::nodes(n));
    const auto l = ldm(inst);
    if (ckk.trace.empty() || ckk.trace.front().delta != l.delta ||
        ckk.trace.front().nodes_at_event != n) {
      log << "  instance " << i << ": first ckk event mismatch\n";
      ok = false;
      break;
    }
    check_events(inst, ckk, ok);

    const auto cb = cbldm_solve(inst, CardinalityConstraint::balanced_for(n),
                                SearchLimits::nodes(n));
    const auto b = bldm(inst);
    if (cb.trace.empty() || cb.trace.front().delta != b.delta ||
        std::abs(cb.trace.front().assignment.card_diff) !=
            std::abs(b.card_diff)) {
      log << "  instance " << i << ": first cbldm event mismatch\n";
      ok = false;
      break;
    }
    check_events(inst, cb, ok);
  }
  return ok;
}

// --- criterion 3 -----------------------------------------------------------
// Disabling either pruning rule never changes the optimum and never
// reduces the node count; t = n solves within 2n nodes.
bool criterion3(std::ostream& log) {
  bool ok = true;
  for (int i = 0; i < 300 && ok; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i) % 13;  // 2..14
    const auto inst =
        exp_::gen_instance(12, n, exp_::derive_seed(1003, i, 0));
    const auto balanced = CardinalityConstraint::balanced_for(n);

    SolveOptions no_value;
    no_value.use_value_prune = false;
    SolveOptions no_card;
    no_card.use_cardinality_prune = false;

    const auto ckk = ckk_solve(inst);
    const auto ckk_nv = ckk_solve(inst, {}, {}, no_value);
    if (ckk.best->delta != ckk_nv.best->delta ||
        ckk.nodes_generated > ckk_nv.nodes_generated) {
      log << "  instance " << i << ": ckk value-prune soundness violated\n";
      ok = false;
      break;
    }

    const auto cb = cbldm_solve(inst, balanced);
    const auto cb_nv = cbldm_solve(inst, balanced, {}, {}, no_value);
    const auto cb_nc = cbldm_solve(inst, balanced, {}, {}, no_card);
    if (cb.best->delta != cb_nv.best->delta ||
        cb.best->delta != cb_nc.best->delta ||
        cb.nodes_generated > cb_nv.nodes_generated ||
        cb.nodes_generated > cb_nc.nodes_generated) {
      log << "  instance " << i << ": cbldm prune soundness violated\n";
      ok = false;
      break;
    }
    check_events(inst, cb, ok);

    const auto trivial = cbldm_solve(
        inst, CardinalityConstraint::target_abs(static_cast<std::int64_t>(n)));
    if (trivial.best->delta != inst.total() ||
        trivial.nodes_generated > 2 * n) {
      log << "  instance " << i << ": t=n not found within 2n nodes ("
          << trivial.nodes_generated << ")\n";
      ok = false;
      break;
    }
  }
  return ok;
}

// --- criterion 4 -----------------------------------------------------------
// Desk-scale phase transition at b = 15: fraction_perfect crosses 0.5
// within n_c +- 2 of the predicted 19.1, low at n = 15, high at n = 24.
bool criterion4(std::ostream& log) {
  exp_::SweepConfig config;
  config.bits = 15;
  config.n_values.clear();
  for (std::size_t n = 12; n <= 28; ++n) config.n_values.push_back(n);
  config.instances_per_n = 100;
  config.mode = exp_::SolveMode::Cbldm;
  config.target = exp_::TargetRule::balanced_rule();
  config.base_seed = 1004;
  const auto rows = exp_::phase_sweep(config, g_ctx.workers);

  const double nc = theory::critical_n(theory::moments_uniform_bits(15), true);
  log << "  predicted n_c = " << nc << "\n";
  bool ok = true;
  double at15 = -1, at24 = -1;
  double crossing = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].n == 15) at15 = rows[i].fraction_perfect;
    if (rows[i].n == 24) at24 = rows[i].fraction_perfect;
    if (crossing < 0 && rows[i].fraction_perfect >= 0.5) {
      if (i == 0) {
        crossing = static_cast<double>(rows[i].n);
      } else {
        const double f0 = rows[i - 1].fraction_perfect;
        const double f1 = rows[i].fraction_perfect;
        crossing = static_cast<double>(rows[i - 1].n) +
                   (0.5 - f0) / (f1 - f0);
      }
    }
  }
  log << "  fraction_perfect(15) = " << at15
      << ", fraction_perfect(24) = " << at24 << ", 0.5-crossing = "
      << crossing << "\n";
  if (!(at15 <= 0.05)) {
    log << "  expected fraction_perfect(15) <= 0.05\n";
    ok = false;
  }
  if (!(at24 >= 0.95)) {
    log << "  expected fraction_perfect(24) >= 0.95\n";
    ok = false;
  }
  if (!(crossing >= nc - 2.0 && crossing <= nc + 2.0)) {
    log << "  crossing outside n_c +- 2\n";
    ok = false;
  }
  return ok;
}

// --- criterion 5 -----------------------------------------------------------
// BLDM scaling: mean normalized delta within a factor 10 of the
// conjectured (sqrt(2)-1) n^(-(2/3) ln n), strictly decreasing in n.
bool criterion5(std::ostream& log) {
  const std::vector<std::size_t> ns = {64, 128, 256};
  const auto rows = exp_::bldm_scaling(ns, 200, 1005);
  bool ok = true;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    const double predicted =
        theory::bldm_prediction(static_cast<double>(row.n));
    const double ratio = row.mean_norm_delta / predicted;
    log << "  n=" << row.n << " mean=" << row.mean_norm_delta
        << " predicted=" << predicted << " ratio=" << ratio << "\n";
    if (!(ratio >= 0.1 && ratio <= 10.0)) {
      log << "  outside the factor-10 band\n";
      ok = false;
    }
    if (!(row.mean_norm_delta < prev)) {
      log << "  means not strictly decreasing\n";
      ok = false;
    }
    prev = row.mean_norm_delta;
  }
  return ok;
}

// --- criterion 6 -----------------------------------------------------------
// Anytime progress on 100 x 150-bit instances: strictly improving
// trace, two orders of magnitude gained within 10^6 nodes, fitted
// exponent in [0.4, 1.2].
bool criterion6(std::ostream& log) {
  bool ok = true;
  std::vector<exp_::TracePoint> pooled;
  for (int seed = 0; seed < 5 && ok; ++seed) {
    const auto inst =
        exp_::gen_instance(150, 100, exp_::derive_seed(1006, seed, 0));
    const auto report =
        cbldm_solve(inst, CardinalityConstraint::balanced_for(100),
                    SearchLimits::nodes(1000000));
    if (report.trace.empty()) {
      log << "  seed " << seed << ": no solution within budget\n";
      ok = false;
      break;
    }
    check_events(inst, report, ok);
    for (std::size_t i = 1; i < report.trace.size(); ++i) {
      if (!(report.trace[i].delta < report.trace[i - 1].delta)) {
        log << "  seed " << seed << ": trace not strictly improving\n";
        ok = false;
      }
    }
    const Magnitude& first = report.trace.front().delta;
    const Magnitude& last = report.trace.back().delta;
    // final ratio >= 100, checked exactly on the integers
    if (last.is_zero() || first.rep() < last.rep() * 100) {
      log << "  seed " << seed << ": final ratio below 100 (first="
          << first.to_decimal() << ", last=" << last.to_decimal() << ")\n";
      ok = false;
    }
    for (const auto& ev : report.trace) {
      exp_::TracePoint p;
      p.nodes = ev.nodes_at_event;
      p.ratio = static_cast<double>(
          first.rep().convert_to<long double>() /
          ev.delta.rep().convert_to<long double>());
      pooled.push_back(p);
    }
    log << "  seed " << seed << ": " << report.trace.size()
        << " improvements, final ratio ~ "
        << pooled.back().ratio << "\n";
  }
  if (ok) {
    const auto fit = exp_::fit_power_law(pooled);
    log << "  pooled fit: ratio ~ " << fit.coefficient << " * nodes^"
        << fit.exponent << "\n";
    if (!(fit.exponent >= 0.4 && fit.exponent <= 1.2)) {
      log << "  exponent outside [0.4, 1.2]\n";
      ok = false;
    }
  }
  return ok;
}

// --- criterion 7 -----------------------------------------------------------
// Mean exact balanced optimum at b = 64, n = 24 within a factor 3 of
// pi sqrt(1/12) * 24 * 2^-24 (normalized by 2^64).
bool criterion7(std::ostream& log) {
  const std::size_t count = 100;
  std::vector<Magnitude> deltas(count);
  std::vector<int> done(count, 0);
  bool ok = true;

  // independent instances; reuse the sweep worker pool pattern
  std::vector<std::thread> threads;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      const auto inst =
          exp_::gen_instance(64, 24, exp_::derive_seed(1007, i, 0));
      const auto report =
          cbldm_solve(inst, CardinalityConstraint::balanced_for(24));
      if (report.proven_optimal() && report.best) {
        deltas[i] = report.best->delta;
        done[i] = 1;
      }
    }
  };
  const unsigned workers = std::max(1u, g_ctx.workers);
  for (unsigned t = 0; t < workers; ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();

  Magnitude sum;
  for (std::size_t i = 0; i < count; ++i) {
    if (!done[i]) {
      log << "  instance " << i << " did not prove optimality\n";
      return false;
    }
    sum += deltas[i];
  }
  const double mean_norm = static_cast<double>(
      sum.rep().convert_to<long double>() /
      (Magnitude::pow2(64).rep().convert_to<long double>() * count));
  const double predicted =
      theory::expected_optimum({1.0 / 3.0, 1.0 / 12.0}, 24.0, true);
  const double ratio = mean_norm / predicted;
  log << "  mean normalized optimum = " << mean_norm
      << ", closed-form prediction = " << predicted << ", ratio = " << ratio
      << "\n";
  if (!(ratio >= 1.0 / 3.0 && ratio <= 3.0)) {
    log << "  outside the factor-3 band\n";
    ok = false;
  }
  return ok;
}

// --- criterion 8 -----------------------------------------------------------
// Parity and tree invariants; extraction consistency tallied across
// the improvement events of the other criteria.
bool criterion8(std::ostream& log) {
  bool ok = true;
  for (int s = 0; s < 200 && ok; ++s) {
    const std::size_t n = 1 + static_cast<std::size_t>(s) % 12;
    const auto inst =
        exp_::gen_instance(12, n, exp_::derive_seed(1008, s, 0));
    const auto terminals = enumerate_tree_terminals(inst);
    const std::uint64_t expected =
        n == 1 ? 1 : (std::uint64_t{1} << (n - 1));
    if (terminals.size() != expected) {
      log << "  seed " << s << ": terminal count " << terminals.size()
          << " != " << expected << "\n";
      ok = false;
      break;
    }
    const bool total_odd = inst.total().odd();
    std::set<std::pair<Magnitude, std::int64_t>> tree_pairs;
    for (const auto& [delta, card] : terminals) {
      if (delta.odd() != total_odd ||
          (std::abs(card) % 2) != static_cast<std::int64_t>(n % 2)) {
        log << "  seed " << s << ": terminal parity violated\n";
        ok = false;
        break;
      }
      tree_pairs.emplace(delta, std::abs(card));
    }
    if (!ok) break;

    // direct sign enumeration of all (delta, |m|) pairs
    std::set<std::pair<Magnitude, std::int64_t>> sign_pairs;
    const std::uint64_t limit = n == 1 ? 1 : (std::uint64_t{1} << (n - 1));
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      Magnitude::Rep acc = inst.weight(0).rep();
      std::int64_t card = 1;
      for (std::size_t i = 1; i < n; ++i) {
        if (mask >> (i - 1) & 1) {
          acc -= inst.weight(i).rep();
          --card;
        } else {
          acc += inst.weight(i).rep();
          ++card;
        }
      }
      sign_pairs.emplace(
          Magnitude(acc.sign() < 0 ? Magnitude::Rep(-acc) : acc),
          std::abs(card));
    }
    if (tree_pairs != sign_pairs) {
      log << "  seed " << s << ": tree terminals != sign enumeration\n";
      ok = false;
    }
  }

  log << "  extraction consistency: " << g_ctx.events_checked
      << " improvement events re-derived, " << g_ctx.extraction_failures
      << " failures\n";
  if (g_ctx.extraction_failures != 0) ok = false;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  g_ctx.workers = std::max(1u, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      g_ctx.workers = static_cast<unsigned>(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: npart_acceptance [--only K] [--workers N]\n";
      return 64;
    }
  }

  struct Entry {
    int id;
    const char* name;
    bool (*run)(std::ostream&);
  };
  const Entry entries[] = {
      {1, "oracle equivalence (exact)", criterion1},
      {2, "anytime first-solution contract (exact)", criterion2},
      {3, "pruning soundness (exact)", criterion3},
      {4, "phase transition at desk scale", criterion4},
      {5, "BLDM scaling conjecture (order of magnitude)", criterion5},
      {6, "anytime progress (property + loose fit)", criterion6},
      {7, "expected-optimum sanity (loose)", criterion7},
      {8, "parity and tree invariants", criterion8},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    if (only != 0 && entry.id != only) continue;
    std::ostringstream log;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = entry.run(log);
    } catch (const std::exception& e) {
      log << "  exception: " << e.what() << "\n";
      ok = false;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("criterion %d (%s): %s  [%.1f s]\n", entry.id, entry.name,
                ok ? "PASS" : "FAIL", seconds);
    std::fputs(log.str().c_str(), stdout);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
