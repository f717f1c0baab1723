#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "npart/core.hpp"

namespace npart::test {

inline Instance make_instance(std::initializer_list<std::uint64_t> weights) {
  std::vector<Magnitude> w;
  w.reserve(weights.size());
  for (auto v : weights) w.push_back(Magnitude(v));
  return Instance(std::move(w));
}

// Signed sum recomputed independently of PartitionAssignment.
inline Magnitude signed_sum_abs(const Instance& inst,
                                const std::vector<std::int8_t>& signs) {
  Magnitude::Rep acc = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] > 0) {
      acc += inst.weight(i).rep();
    } else {
      acc -= inst.weight(i).rep();
    }
  }
  return Magnitude(acc.sign() < 0 ? Magnitude::Rep(-acc) : acc);
}

}  // namespace npart::test
