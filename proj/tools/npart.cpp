// Command-line surface for the number partitioning toolkit: instance
// generation, differencing heuristics, the exact anytime solvers, and
// the experiment/theory pipelines. All outputs are line-oriented and
// scriptable; improvement events stream as the solver runs.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "npart/core.hpp"
#include "npart/experiments.hpp"
#include "npart/heuristics.hpp"
#include "npart/oracle.hpp"
#include "npart/search.hpp"
#include "npart/theory.hpp"

namespace {

using nlohmann::json;

// Exit codes, stable for scripting.
constexpr int kOk = 0;
constexpr int kUsageError = 2;
constexpr int kInputError = 3;
constexpr int kNoSolution = 4;
constexpr int kInternalError = 5;

struct OutFile {
  std::ofstream file;
  std::ostream* stream = nullptr;

  explicit OutFile(const std::string& path) {
    if (path.empty() || path == "-") {
      stream = &std::cout;
      return;
    }
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    stream = &file;
  }
  std::ostream& get() { return *stream; }
};

npart::Instance load_instance(const std::string& path) {
  if (path == "-") return npart::read_instance(std::cin);
  return npart::read_instance_file(path);
}

// "balanced" or a non-negative integer.
npart::CardinalityConstraint parse_target(const std::string& text,
                                          std::size_t n) {
  if (text == "balanced") return npart::CardinalityConstraint::balanced_for(n);
  std::size_t used = 0;
  long long t = -1;
  try {
    t = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid --target value: " + text);
  }
  if (used != text.size() || t < 0) {
    throw std::invalid_argument("invalid --target value: " + text);
  }
  auto c = npart::CardinalityConstraint::target_abs(t);
  c.validate_for(n);
  return c;
}

// Comma list with "a..b" inclusive ranges: "12,14..16" -> 12,14,15,16.
std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    std::size_t lo = 0, hi = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoull(item);
    } else {
      lo = std::stoull(item.substr(0, dots));
      hi = std::stoull(item.substr(dots + 2));
    }
    if (lo == 0 || hi < lo) {
      throw std::invalid_argument("invalid --n entry: " + item);
    }
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty --n list");
  return out;
}

npart::SearchLimits make_limits(std::uint64_t max_nodes, double max_seconds) {
  npart::SearchLimits limits;
  if (max_nodes > 0) limits.max_nodes = max_nodes;
  if (max_seconds > 0) {
    limits.max_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double>(max_seconds));
  }
  return limits;
}

void print_report(std::ostream& out, const npart::SolveReport& report,
                  bool json_lines) {
  if (json_lines) {
    json j;
    j["type"] = "summary";
    j["status"] = npart::to_string(report.status);
    j["nodes"] = report.nodes_generated;
    j["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(report.elapsed).count();
    if (report.best) {
      j["delta"] = report.best->delta.to_decimal();
      j["card_diff"] = report.best->card_diff;
      j["signs"] = npart::sign_string(report.best->signs);
    }
    out << j.dump() << "\n";
    return;
  }
  out << "summary\n";
  out << "status," << npart::to_string(report.status) << "\n";
  if (report.best) {
    out << "delta," << report.best->delta.to_decimal() << "\n";
    out << "card_diff," << report.best->card_diff << "\n";
  }
  out << "nodes," << report.nodes_generated << "\n";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f",
                std::chrono::duration<double, std::milli>(report.elapsed)
                    .count());
  out << "elapsed_ms," << buf << "\n";
  if (report.best) {
    out << "signs," << npart::sign_string(report.best->signs) << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"npart: exact and heuristic two-way number partitioning"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a seeded random instance");
  unsigned gen_bits = 25;
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "-";
  gen->add_option("--bits", gen_bits, "bit width b; weights are uniform on [0, 2^b)")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_n, "number of weights")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "generator seed (default 1)");
  gen->add_option("--out", gen_out, "output file ('-' for stdout)");

  // --- heuristic ---
  auto* heur = app.add_subcommand("heuristic", "run a differencing heuristic");
  std::string heur_alg;
  std::string heur_path;
  std::string heur_format = "csv";
  heur->add_option("--alg", heur_alg, "pdm, ldm or bldm")
      ->required()
      ->check(CLI::IsMember({"pdm", "ldm", "bldm"}));
  heur->add_option("--format", heur_format, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}));
  heur->add_option("instance", heur_path, "instance file ('-' for stdin)")
      ->required();

  // --- solve ---
  auto* solve_cmd = app.add_subcommand("solve", "run a complete anytime solver");
  std::string solve_mode = "cbldm";
  std::string solve_target = "balanced";
  std::uint64_t solve_max_nodes = 0;
  double solve_max_seconds = 0;
  std::string solve_path;
  std::string solve_format = "csv";
  solve_cmd->add_option("--mode", solve_mode, "ckk or cbldm")
      ->check(CLI::IsMember({"ckk", "cbldm"}));
  auto* solve_target_opt = solve_cmd->add_option(
      "--target", solve_target, "cardinality target: 'balanced' or |m| = t");
  solve_cmd->add_option("--max-nodes", solve_max_nodes, "node budget (0 = unbounded)");
  solve_cmd->add_option("--max-seconds", solve_max_seconds, "time budget (0 = unbounded)");
  solve_cmd->add_option("--format", solve_format, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}));
  solve_cmd->add_option("instance", solve_path, "instance file ('-' for stdin)")
      ->required();

  // --- sweep ---
  auto* sweep = app.add_subcommand(
      "sweep", "solve batches of seeded instances, emit per-n statistics");
  std::string sweep_mode = "cbldm";
  unsigned sweep_bits = 15;
  std::string sweep_ns;
  std::size_t sweep_instances = 100;
  std::string sweep_target = "balanced";
  std::uint64_t sweep_seed = 1;
  unsigned sweep_workers = 1;
  std::uint64_t sweep_max_nodes = 0;
  double sweep_max_seconds = 0;
  std::string sweep_out = "-";
  std::string sweep_format = "csv";
  sweep->add_option("--mode", sweep_mode, "ckk or cbldm")
      ->check(CLI::IsMember({"ckk", "cbldm"}));
  sweep->add_option("--bits", sweep_bits, "bit width of the weights");
  sweep->add_option("--n", sweep_ns, "n values, e.g. '12..28' or '20,30,40'")
      ->required();
  sweep->add_option("--instances", sweep_instances, "instances per n");
  sweep->add_option("--target", sweep_target, "'balanced' or fixed t (cbldm)");
  sweep->add_option("--seed", sweep_seed, "base seed");
  sweep->add_option("--workers", sweep_workers, "worker threads (default 1)");
  sweep->add_option("--max-nodes", sweep_max_nodes,
                    "per-run node budget (0 = unbounded; exhaustion aborts)");
  sweep->add_option("--max-seconds", sweep_max_seconds, "per-run time budget");
  sweep->add_option("--out", sweep_out, "output file ('-' for stdout)");
  sweep->add_option("--format", sweep_format, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}));

  // --- trace ---
  auto* trace = app.add_subcommand(
      "trace", "anytime progress of cbldm as (nodes, ratio) points");
  unsigned trace_bits = 150;
  std::size_t trace_n = 100;
  std::uint64_t trace_seed = 1;
  std::string trace_target = "balanced";
  std::uint64_t trace_max_nodes = 1000000;
  double trace_max_seconds = 0;
  std::string trace_out = "-";
  std::string trace_path;
  std::string trace_format = "csv";
  bool trace_fit = false;
  trace->add_option("--bits", trace_bits, "bit width for a generated instance");
  trace->add_option("--n", trace_n, "size of a generated instance");
  trace->add_option("--seed", trace_seed, "seed for a generated instance");
  trace->add_option("--target", trace_target, "'balanced' or fixed t");
  trace->add_option("--max-nodes", trace_max_nodes, "node budget (default 1e6)");
  trace->add_option("--max-seconds", trace_max_seconds, "time budget");
  trace->add_option("--out", trace_out, "output file ('-' for stdout)");
  trace->add_flag("--fit", trace_fit,
                  "print a least-squares power-law fit line to stdout");
  trace->add_option("instance", trace_path,
                    "instance file (omit to generate from --bits/--n/--seed)");

  // --- theory ---
  auto* theory_cmd = app.add_subcommand(
      "theory", "closed-form predictions: n_c, expected optimum, BLDM fit");
  unsigned theory_bits = 25;
  bool theory_unconstrained = false;
  std::size_t theory_n = 0;
  theory_cmd->add_option("--bits", theory_bits, "bit width of the ensemble")
      ->required();
  bool theory_balanced = false;
  auto* balanced_flag = theory_cmd->add_flag(
      "--balanced", theory_balanced, "predict for the balanced problem (default)");
  theory_cmd
      ->add_flag("--unconstrained", theory_unconstrained,
                 "predict for the unconstrained problem")
      ->excludes(balanced_flag);
  theory_cmd->add_option("--n", theory_n,
                         "also print expected optimum and BLDM prediction at n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  if (gen->parsed()) {
    const auto inst = npart::experiments::gen_instance(gen_bits, gen_n, gen_seed);
    OutFile out(gen_out);
    npart::write_instance(out.get(), inst);
    return kOk;
  }

  if (heur->parsed()) {
    const auto inst = load_instance(heur_path);
    const npart::HeuristicKind kind = heur_alg == "pdm" ? npart::HeuristicKind::Pdm
                                      : heur_alg == "ldm"
                                          ? npart::HeuristicKind::Ldm
                                          : npart::HeuristicKind::Bldm;
    const auto assignment = npart::run_heuristic(kind, inst);
    if (heur_format == "json-lines") {
      json j;
      j["alg"] = heur_alg;
      j["delta"] = assignment.delta.to_decimal();
      j["card_diff"] = assignment.card_diff;
      j["signs"] = npart::sign_string(assignment.signs);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "delta," << assignment.delta.to_decimal() << "\n";
      std::cout << "card_diff," << assignment.card_diff << "\n";
      std::cout << "signs," << npart::sign_string(assignment.signs) << "\n";
    }
    return kOk;
  }

  if (solve_cmd->parsed()) {
    const auto inst = load_instance(solve_path);
    const auto limits = make_limits(solve_max_nodes, solve_max_seconds);
    const bool json_lines = solve_format == "json-lines";
    npart::EventSink sink = [&](const npart::ImprovementEvent& ev) {
      if (json_lines) {
        json j;
        j["type"] = "event";
        j["nodes"] = ev.nodes_at_event;
        j["delta"] = ev.delta.to_decimal();
        std::cout << j.dump() << "\n" << std::flush;
      } else {
        std::cout << "event," << ev.nodes_at_event << ","
                  << ev.delta.to_decimal() << "\n"
                  << std::flush;
      }
    };
    npart::SolveReport report;
    if (solve_mode == "ckk") {
      if (!solve_target_opt->empty()) {
        throw std::invalid_argument("--target applies only to --mode cbldm");
      }
      report = npart::ckk_solve(inst, limits, sink);
    } else {
      report = npart::cbldm_solve(inst, parse_target(solve_target, inst.n()),
                                  limits, sink);
    }
    print_report(std::cout, report, json_lines);
    return report.best ? kOk : kNoSolution;
  }

  if (sweep->parsed()) {
    npart::experiments::SweepConfig config;
    config.bits = sweep_bits;
    config.n_values = parse_n_list(sweep_ns);
    config.instances_per_n = sweep_instances;
    config.mode = sweep_mode == "ckk" ? npart::experiments::SolveMode::Ckk
                                      : npart::experiments::SolveMode::Cbldm;
    if (sweep_target == "balanced") {
      config.target = npart::experiments::TargetRule::balanced_rule();
    } else {
      config.target = npart::experiments::TargetRule::fixed(
          std::stoll(sweep_target));
    }
    config.limits = make_limits(sweep_max_nodes, sweep_max_seconds);
    config.base_seed = sweep_seed;
    const auto rows = npart::experiments::phase_sweep(config, sweep_workers);
    OutFile out(sweep_out);
    if (sweep_format == "json-lines") {
      for (const auto& r : rows) {
        json j;
        j["n"] = r.n;
        j["mean_nodes"] = r.mean_nodes;
        j["median_nodes"] = r.median_nodes;
        j["fraction_perfect"] = r.fraction_perfect;
        j["mean_delta"] = r.mean_delta;
        out.get() << j.dump() << "\n";
      }
    } else {
      npart::experiments::write_sweep_csv(out.get(), rows);
    }
    return kOk;
  }

  if (trace->parsed()) {
    std::optional<npart::Instance> inst;
    if (!trace_path.empty()) {
      inst = load_instance(trace_path);
    } else {
      inst = npart::experiments::gen_instance(trace_bits, trace_n, trace_seed);
    }
    const auto constraint = parse_target(trace_target, inst->n());
    const auto limits = make_limits(trace_max_nodes, trace_max_seconds);
    const auto points =
        npart::experiments::anytime_trace(*inst, constraint, limits);
    OutFile out(trace_out);
    if (trace_format == "json-lines") {
      for (const auto& p : points) {
        json j;
        j["nodes"] = p.nodes;
        j["ratio"] = p.ratio;
        out.get() << j.dump() << "\n";
      }
    } else {
      npart::experiments::write_trace_csv(out.get(), points);
    }
    if (trace_fit) {
      const auto fit = npart::experiments::fit_power_law(points);
      char buf[96];
      std::snprintf(buf, sizeof buf, "fit,%.6g,%.6g", fit.coefficient,
                    fit.exponent);
      std::cout << buf << "\n";
    }
    return kOk;
  }

  if (theory_cmd->parsed()) {
    const auto moments = npart::theory::moments_uniform_bits(theory_bits);
    const bool balanced = !theory_unconstrained;
    char buf[96];
    std::snprintf(buf, sizeof buf, "n_c,%.6g",
                  npart::theory::critical_n(moments, balanced));
    std::cout << buf << "\n";
    if (theory_n > 0) {
      std::snprintf(buf, sizeof buf, "expected_optimum,%.6g",
                    npart::theory::expected_optimum(
                        moments, static_cast<double>(theory_n), balanced));
      std::cout << buf << "\n";
      std::snprintf(buf, sizeof buf, "bldm_prediction,%.6g",
                    npart::theory::bldm_prediction(
                        static_cast<double>(theory_n)));
      std::cout << buf << "\n";
    }
    return kOk;
  }

  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const npart::budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoSolution;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}
