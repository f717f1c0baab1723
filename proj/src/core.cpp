#include "npart/core.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace npart {

PartitionAssignment evaluate(const Instance& instance,
                             const std::vector<std::int8_t>& signs) {
  if (signs.size() != instance.n()) {
    throw std::invalid_argument("evaluate: sign vector length != n");
  }
  Magnitude::Rep signed_sum = 0;
  std::int64_t card = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw std::invalid_argument("evaluate: signs must be +1 or -1");
    }
    if (signs[i] > 0) {
      signed_sum += instance.weight(i).rep();
      ++card;
    } else {
      signed_sum -= instance.weight(i).rep();
      --card;
    }
  }
  PartitionAssignment out;
  out.signs = signs;
  out.delta = Magnitude(signed_sum.sign() < 0 ? Magnitude::Rep(-signed_sum)
                                              : signed_sum);
  out.card_diff = card;
  return out;
}

TotalParity total_and_parity(const Instance& instance) {
  TotalParity tp;
  tp.total = instance.total();
  tp.odd = tp.total.odd();
  return tp;
}

std::string sign_string(const std::vector<std::int8_t>& signs) {
  std::string s;
  s.reserve(signs.size());
  for (auto v : signs) s.push_back(v > 0 ? '+' : '-');
  return s;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ProvenOptimal: return "ProvenOptimal";
    case SolveStatus::PerfectFound: return "PerfectFound";
    case SolveStatus::NodeBudgetExhausted: return "NodeBudgetExhausted";
    case SolveStatus::TimeBudgetExhausted: return "TimeBudgetExhausted";
  }
  return "Unknown";
}

Instance read_instance(std::istream& in) {
  std::vector<Magnitude> weights;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      weights.push_back(Magnitude::from_decimal(line));
    } catch (const std::invalid_argument&) {
      std::ostringstream msg;
      msg << "instance line " << lineno << ": expected a non-negative decimal "
          << "integer, got '" << line << "'";
      throw std::invalid_argument(msg.str());
    }
  }
  if (weights.empty()) {
    throw std::invalid_argument("instance: no weights found");
  }
  return Instance(std::move(weights));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open instance file: " + path);
  }
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance) {
  if (instance.meta()) {
    const auto& m = *instance.meta();
    out << "# " << (m.source.empty() ? "instance" : m.source)
        << " bits=" << m.bit_width << " n=" << instance.n()
        << " seed=" << m.seed << "\n";
  }
  for (const auto& w : instance.weights()) {
    out << w.to_decimal() << "\n";
  }
}

void write_instance_file(const std::string& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write instance file: " + path);
  }
  write_instance(out, instance);
}

}  // namespace npart
