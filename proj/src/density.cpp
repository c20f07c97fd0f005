#include "rhostat/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rhostat/error.hpp"

namespace rhostat {

const char* to_string(Normalization n) noexcept {
  switch (n) {
    case Normalization::Weighted: return "weighted";
    case Normalization::Window: return "window";
  }
  return "unknown";
}

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Accept: return "Accept";
    case Outcome::Reject: return "Reject";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

std::vector<std::uint64_t> default_n_grid(std::uint64_t n_max) {
  constexpr std::uint64_t kTop = std::uint64_t{1} << 20;
  std::vector<std::uint64_t> grid;
  for (std::uint64_t p = std::uint64_t{1} << 7; p <= kTop && p <= n_max; p <<= 1) grid.push_back(p);
  if (n_max >= 2 && n_max < kTop && (grid.empty() || grid.back() != n_max)) grid.push_back(n_max);
  for (std::uint64_t p = std::uint64_t{1} << 6; grid.size() < 4 && p >= 2; p >>= 1) {
    if (p < n_max) grid.insert(grid.begin(), p);
  }
  return grid;
}

std::vector<double> default_eps_grid() { return {1.0, 0.5, 0.1, 0.05, 0.01}; }

std::vector<std::uint64_t> default_theta(std::uint64_t limit) {
  std::vector<std::uint64_t> theta{0};
  for (std::uint64_t k = 2; k <= limit; k <<= 1) theta.push_back(k);
  return theta;
}

std::uint64_t max_checkpoint(const SequenceSource& source, Predicate predicate) {
  if (!kernels::reads_successor(predicate)) return source.horizon();
  return source.horizon() == 0 ? 0 : source.horizon() - 1;
}

namespace {

void check_inputs(double eps, Predicate predicate, const std::optional<double>& level) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    fail(ErrorCode::InvalidConfig, "epsilon must be positive and finite");
  if (predicate == Predicate::Deviation && !level)
    fail(ErrorCode::MissingLevel, "the deviation predicate needs a level");
  if (predicate != Predicate::Deviation && level)
    fail(ErrorCode::InvalidConfig,
         std::string("a level only applies to the deviation predicate, not ") +
             kernels::to_string(predicate));
  if (level && !std::isfinite(*level)) fail(ErrorCode::NonFiniteValue, "level is not finite");
}

void check_grid(std::span<const std::uint64_t> grid, std::uint64_t limit, const std::string& label) {
  if (grid.empty()) fail(ErrorCode::GridOutOfRange, "checkpoint grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2)
      fail(ErrorCode::GridOutOfRange, "checkpoints start at n = 2; got " + std::to_string(grid[i]));
    if (i > 0 && grid[i] <= grid[i - 1])
      fail(ErrorCode::GridOutOfRange, "checkpoints must be strictly increasing");
  }
  if (grid.back() > limit) {
    fail(ErrorCode::GridOutOfRange, "checkpoint " + std::to_string(grid.back()) +
                                        " is beyond what '" + label + "' supports (" +
                                        std::to_string(limit) + ")");
  }
}

// v[i] holds alpha_{i+1}; the predicate "at k" reads v[k-1] (and v[k]).
DensityProfile profile_from_prefix(std::span<const double> v, const WeightSequence& weights,
                                   double eps, Predicate predicate, std::optional<double> level,
                                   std::span<const std::uint64_t> grid) {
  DensityProfile profile;
  profile.epsilon = eps;
  profile.predicate = predicate;
  profile.level = level;
  profile.checkpoints.reserve(grid.size());
  const double lvl = level.value_or(0.0);
  std::uint64_t count = 0;
  std::uint64_t done = 0;
  for (const auto n : grid) {
    count += kernels::count_hits(predicate, v, done, n, eps, lvl);
    done = n;
    const double rho = weights.at(n);
    profile.checkpoints.push_back({n, count, rho, static_cast<double>(count) / rho});
  }
  return profile;
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

DensityProfile density_profile(const SequenceSource& source, const WeightSequence& weights,
                               double eps, Predicate predicate, std::optional<double> level,
                               std::span<const std::uint64_t> grid) {
  const double e[] = {eps};
  return std::move(density_profiles(source, weights, e, predicate, level, grid).front());
}

std::vector<DensityProfile> density_profiles(const SequenceSource& source,
                                             const WeightSequence& weights,
                                             std::span<const double> eps_grid,
                                             Predicate predicate, std::optional<double> level,
                                             std::span<const std::uint64_t> grid) {
  if (eps_grid.empty()) fail(ErrorCode::InvalidConfig, "epsilon grid is empty");
  for (const double eps : eps_grid) check_inputs(eps, predicate, level);
  check_grid(grid, max_checkpoint(source, predicate), source.label());
  if (grid.back() > weights.horizon()) {
    fail(ErrorCode::HorizonExceeded, "checkpoint " + std::to_string(grid.back()) +
                                         " exceeds the weight horizon " +
                                         std::to_string(weights.horizon()));
  }
  const std::uint64_t needed = grid.back() + (kernels::reads_successor(predicate) ? 1 : 0);
  const Prefix prefix = source.prefix(needed);

  std::vector<DensityProfile> out;
  out.reserve(eps_grid.size());
  for (const double eps : eps_grid)
    out.push_back(profile_from_prefix(prefix.values, weights, eps, predicate, level, grid));
  return out;
}

DensityProfile window_profile(const SequenceSource& source, double eps, Predicate predicate,
                              std::optional<double> level, std::span<const std::uint64_t> theta) {
  check_inputs(eps, predicate, level);
  if (theta.size() < 2 || theta.front() != 0)
    fail(ErrorCode::InvalidTheta, "theta must start at k_0 = 0 and have at least one window");
  for (std::size_t r = 1; r < theta.size(); ++r) {
    if (theta[r] <= theta[r - 1])
      fail(ErrorCode::InvalidTheta, "theta must be strictly increasing; k_" + std::to_string(r) +
                                        " = " + std::to_string(theta[r]));
  }
  const std::uint64_t limit = max_checkpoint(source, predicate);
  std::size_t windows = 0;
  while (windows + 1 < theta.size() && theta[windows + 1] <= limit) ++windows;
  if (windows == 0)
    fail(ErrorCode::GridOutOfRange, "no window of theta fits in '" + source.label() + "'");

  const std::uint64_t needed = theta[windows] + (kernels::reads_successor(predicate) ? 1 : 0);
  const Prefix prefix = source.prefix(needed);
  DensityProfile profile;
  profile.epsilon = eps;
  profile.predicate = predicate;
  profile.level = level;
  profile.normalization = Normalization::Window;
  profile.checkpoints.reserve(windows);
  const double lvl = level.value_or(0.0);
  for (std::size_t r = 1; r <= windows; ++r) {
    // I_r = (k_{r-1}, k_r] is 0-based [k_{r-1}, k_r).
    const std::uint64_t hits =
        kernels::count_hits(predicate, prefix.values, theta[r - 1], theta[r], eps, lvl);
    const double h = static_cast<double>(theta[r] - theta[r - 1]);
    profile.checkpoints.push_back({theta[r], hits, h, static_cast<double>(hits) / h});
  }
  return profile;
}

Verdict limit_verdict(const DensityProfile& profile, const Tolerances& tol) {
  const auto& cp = profile.checkpoints;
  if (cp.size() < 4) {
    fail(ErrorCode::InsufficientEvidence,
         "a limit verdict needs at least 4 checkpoints; have " + std::to_string(cp.size()));
  }
  const std::size_t m = cp.size();
  const double a = cp[m - 3].density;
  const double b = cp[m - 2].density;
  const double c = cp[m - 1].density;
  Verdict v;
  v.tolerances = tol;
  if (c < tol.accept && a >= b && b >= c) v.outcome = Outcome::Accept;
  else if (c > tol.reject && a <= b && b <= c) v.outcome = Outcome::Reject;
  else v.outcome = Outcome::Inconclusive;
  v.evidence.push_back(profile);
  v.per_profile.push_back(v.outcome);
  v.narrative = "eps=" + format_number(profile.epsilon) + " " + to_string(v.outcome) +
                " (d=" + format_number(c) + " at n=" + std::to_string(cp.back().n) + ")";
  return v;
}

Outcome combine_outcomes(std::span<const Outcome> outcomes) {
  bool all_accept = !outcomes.empty();
  for (const auto o : outcomes) {
    if (o == Outcome::Reject) return Outcome::Reject;
    if (o != Outcome::Accept) all_accept = false;
  }
  return all_accept ? Outcome::Accept : Outcome::Inconclusive;
}

Verdict eps_sweep(const SequenceSource& source, const WeightSequence& weights, Predicate predicate,
                  std::optional<double> level, std::span<const double> eps_grid,
                  std::span<const std::uint64_t> n_grid, const Tolerances& tol) {
  if (eps_grid.empty()) fail(ErrorCode::InvalidConfig, "epsilon grid is empty");
  for (std::size_t i = 1; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] < eps_grid[i - 1]))
      fail(ErrorCode::InvalidConfig, "epsilon grid must be strictly descending");
  }
  auto profiles = density_profiles(source, weights, eps_grid, predicate, level, n_grid);

  Verdict out;
  out.tolerances = tol;
  std::vector<std::string> parts;
  for (auto& p : profiles) {
    Verdict one = limit_verdict(p, tol);
    out.per_profile.push_back(one.outcome);
    parts.push_back(std::move(one.narrative));
    out.evidence.push_back(std::move(p));
  }
  out.outcome = combine_outcomes(out.per_profile);
  // Smallest epsilon first: it is the hardest test and the one that decides.
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (!out.narrative.empty()) out.narrative += "; ";
    out.narrative += *it;
  }
  return out;
}

}  // namespace rhostat
