#pragma once

#include <cstdint>
#include <vector>

#include "rhostat/sequence.hpp"

namespace rhostat {

struct SimConfig {
  std::uint64_t max_n = 64;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::uint64_t exact_cutoff = 8;
};

/// A simulated sequence with the standard error of every term (0 where exact).
struct SimulatedSequence {
  SequenceSource source;
  std::vector<double> standard_error;
  std::vector<bool> exact;
};

/// Largest group size for which the pairing process is enumerated exactly.
inline constexpr std::uint64_t kPairingEnumerationLimit = 8;
/// Largest group size for the exact ternary distribution.
inline constexpr std::uint64_t kTernaryExactLimit = 64;

/// P(U = u) for u = 0..n, where U is the number of people left after one
/// round of the pairing process starting from n, by enumerating all (n-1)^n
/// selection patterns. n must be in [2, kPairingEnumerationLimit].
std::vector<double> pairing_survivor_distribution(std::uint64_t n);

/// alpha_0..alpha_cutoff of the pairing process, exact (alpha_0 = 0, alpha_1 = 1).
std::vector<double> pairing_exact_values(std::uint64_t cutoff);

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of alpha_n given alpha_0..alpha_{n-1} in `lower`
/// (lower[u] = alpha_u). Each trial runs one selection round and scores the
/// known survival probability of the group that remains.
Estimate pairing_monte_carlo(std::uint64_t n, std::span<const double> lower, std::uint64_t trials,
                             std::uint64_t seed);

/// Probability that exactly one person remains, for n = 1..max_n.
SimulatedSequence pairing_survivor_sequence(const SimConfig& cfg);

/// F_k(t) = P(T_k <= t) for k = 0..cutoff, t = 0..t_max, where T_k is the
/// number of rounds the ternary process takes from a group of k.
std::vector<std::vector<double>> ternary_round_cdf(std::uint64_t cutoff, std::uint64_t t_max);

/// E[T_k] for k = 0..cutoff, exact up to truncation below 1e-16.
std::vector<double> ternary_exact_expectations(std::uint64_t cutoff);

/// Monte Carlo estimate of E[T_k]: multinomial splits are drawn for groups
/// above exact_cutoff, and round counts for smaller groups come straight
/// from the exact distribution.
Estimate ternary_monte_carlo(std::uint64_t k, std::uint64_t trials, std::uint64_t seed,
                             std::uint64_t exact_cutoff);

/// alpha_k / k for k = 1..max_n, alpha_k = E[T_k].
SimulatedSequence ternary_split_sequence(const SimConfig& cfg);

/// Deterministic sub-seed for (seed, stream, chunk).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) noexcept;

}  // namespace rhostat
