#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rhostat/kernels.hpp"
#include "rhostat/sequence.hpp"
#include "rhostat/weights.hpp"

namespace rhostat {

using kernels::Predicate;

/// What the count at a checkpoint is divided by.
enum class Normalization {
  Weighted,  // rho_n, counting k <= n
  Window,    // h_r = k_r - k_{r-1}, counting k in (k_{r-1}, k_r]
};

const char* to_string(Normalization n) noexcept;

struct Checkpoint {
  std::uint64_t n = 0;
  std::uint64_t count = 0;
  double denominator = 0.0;
  double density = 0.0;
};

struct DensityProfile {
  double epsilon = 0.0;
  Predicate predicate = Predicate::Downward;
  std::optional<double> level;
  Normalization normalization = Normalization::Weighted;
  std::vector<Checkpoint> checkpoints;

  double final_density() const { return checkpoints.empty() ? 0.0 : checkpoints.back().density; }
};

/// Powers of two 2^7..2^20 not above n_max, then n_max itself when it is
/// below 2^20 and not already present. Short grids extend downward through
/// 2^6, 2^5, ... (never below 2) until four points exist or none remain.
std::vector<std::uint64_t> default_n_grid(std::uint64_t n_max);

/// {1, 0.5, 0.1, 0.05, 0.01}
std::vector<double> default_eps_grid();

/// Exact counts of the predicate up to each checkpoint, divided by rho_n.
///
/// The grid must be strictly increasing within [2, n_max], where n_max is
/// the source horizon (one less for predicates reading alpha_{k+1}) and the
/// weight horizon.
DensityProfile density_profile(const SequenceSource& source, const WeightSequence& weights,
                               double eps, Predicate predicate, std::optional<double> level,
                               std::span<const std::uint64_t> grid);

/// One profile per epsilon, sharing a single prefix evaluation. Output order
/// follows eps_grid.
std::vector<DensityProfile> density_profiles(const SequenceSource& source,
                                             const WeightSequence& weights,
                                             std::span<const double> eps_grid,
                                             Predicate predicate, std::optional<double> level,
                                             std::span<const std::uint64_t> grid);

/// Windowed counts over I_r = (k_{r-1}, k_r] for the windows of theta that fit
/// in the source, normalized by h_r. theta starts with k_0 = 0.
DensityProfile window_profile(const SequenceSource& source, double eps, Predicate predicate,
                              std::optional<double> level, std::span<const std::uint64_t> theta);

/// The lacunary sequence k_0 = 0, k_r = 2^r for every 2^r <= limit.
std::vector<std::uint64_t> default_theta(std::uint64_t limit);

enum class Outcome { Accept, Reject, Inconclusive };

const char* to_string(Outcome o) noexcept;

struct Tolerances {
  double accept = 0.01;  // tau_accept
  double reject = 0.1;   // tau_reject
};

/// A three-valued decision with the profiles that produced it.
struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<DensityProfile> evidence;
  std::vector<Outcome> per_profile;  // parallel to evidence
  Tolerances tolerances;
  /// Named scalars for decisions not backed by a density profile.
  std::vector<std::pair<std::string, double>> statistics;
  std::string narrative;
};

/// Accept when the final density is below tau_accept and the last three
/// checkpoints are non-increasing; Reject when it is above tau_reject and
/// they are non-decreasing. A density equal to a threshold satisfies neither.
Verdict limit_verdict(const DensityProfile& profile, const Tolerances& tol);

/// Conjunction over the epsilon grid: Accept iff every epsilon accepts,
/// Reject if any rejects. eps_grid must be positive and descending.
Verdict eps_sweep(const SequenceSource& source, const WeightSequence& weights, Predicate predicate,
                  std::optional<double> level, std::span<const double> eps_grid,
                  std::span<const std::uint64_t> n_grid, const Tolerances& tol);

/// Combine per-epsilon outcomes the way eps_sweep does.
Outcome combine_outcomes(std::span<const Outcome> outcomes);

/// Largest n the predicate can be evaluated at for these inputs.
std::uint64_t max_checkpoint(const SequenceSource& source, Predicate predicate);

}  // namespace rhostat
