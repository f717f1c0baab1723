#pragma once

namespace npart::theory {

/// Second moment and variance of the weight distribution, in weight^2
/// units. mean_sq >= variance >= 0.
struct EnsembleMoments {
  double mean_sq = 0.0;
  double variance = 0.0;
};

/// Exact moments of the discrete uniform distribution on {0..2^b - 1}.
EnsembleMoments moments_uniform_bits(unsigned bits);

/// Critical size n_c separating the regime without perfect partitions
/// from the regime with exponentially many. Solves
///   unconstrained: n - (1/2) log2 n = (1/2) log2(pi/2 * <x^2>)
///   balanced:      n -       log2 n =       log2(pi * sqrt(var))
/// Throws std::domain_error when no root above 1 exists.
double critical_n(const EnsembleMoments& moments, bool balanced);

/// Expected optimum difference for 1 << n << n_c:
///   unconstrained: sqrt(2 pi <x^2>) * sqrt(n) * 2^-n
///   balanced:      pi * sqrt(var)   *      n * 2^-n
double expected_optimum(const EnsembleMoments& moments, double n,
                        bool balanced);

/// Conjectured normalized BLDM difference for weights in [0,1):
/// (sqrt(2) - 1) * n^(-(2/3) ln n). A prediction, not a bound.
double bldm_prediction(double n);

}  // namespace npart::theory
