#include "npart/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace npart::theory {

namespace {

// Solves n - coeff * log2(n) = rhs for the root above 1. The map
// n -> rhs + coeff * log2(n) is a contraction on [2, inf), so plain
// iteration converges; bisection is the fallback for marginal inputs.
double solve_critical(double coeff, double rhs) {
  const double lo_edge = 1.5;  // above 1/ln 2, where f is increasing
  auto f = [&](double x) { return x - coeff * std::log2(x) - rhs; };

  double n = std::max(2.0, rhs);
  for (int i = 0; i < 200; ++i) {
    const double next = rhs + coeff * std::log2(n);
    if (next <= lo_edge) break;
    if (std::abs(next - n) <= 1e-9 * std::max(1.0, std::abs(next))) {
      return next;
    }
    n = next;
  }

  if (f(lo_edge) > 0.0) {
    throw std::domain_error("critical_n: no root above 1");
  }
  double lo = lo_edge, hi = 500.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e9) throw std::domain_error("critical_n: root out of range");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-9 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

EnsembleMoments moments_uniform_bits(unsigned bits) {
  if (bits == 0) {
    throw std::invalid_argument("moments_uniform_bits: bits must be >= 1");
  }
  const double top = std::exp2(static_cast<double>(bits));       // 2^b
  const double top2 = std::exp2(2.0 * static_cast<double>(bits));  // 2^2b
  EnsembleMoments m;
  const double mean = (top - 1.0) / 2.0;
  m.variance = (top2 - 1.0) / 12.0;
  m.mean_sq = m.variance + mean * mean;
  return m;
}

double critical_n(const EnsembleMoments& moments, bool balanced) {
  if (balanced) {
    if (!(moments.variance > 0.0)) {
      throw std::invalid_argument("critical_n: variance must be positive");
    }
    const double rhs =
        std::log2(std::numbers::pi * std::sqrt(moments.variance));
    return solve_critical(1.0, rhs);
  }
  if (!(moments.mean_sq > 0.0)) {
    throw std::invalid_argument("critical_n: mean square must be positive");
  }
  const double rhs = 0.5 * std::log2(std::numbers::pi / 2.0 * moments.mean_sq);
  return solve_critical(0.5, rhs);
}

double expected_optimum(const EnsembleMoments& moments, double n,
                        bool balanced) {
  if (!(n >= 1.0)) {
    throw std::invalid_argument("expected_optimum: n must be >= 1");
  }
  if (balanced) {
    return std::numbers::pi * std::sqrt(moments.variance) * n * std::exp2(-n);
  }
  return std::sqrt(2.0 * std::numbers::pi * moments.mean_sq) * std::sqrt(n) *
         std::exp2(-n);
}

double bldm_prediction(double n) {
  if (!(n >= 2.0)) {
    throw std::invalid_argument("bldm_prediction: n must be >= 2");
  }
  const double ln_n = std::log(n);
  return (std::numbers::sqrt2 - 1.0) * std::exp(-(2.0 / 3.0) * ln_n * ln_n);
}

}  // namespace npart::theory
