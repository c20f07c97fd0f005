#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rhostat/io.hpp"

namespace rhostat {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// One named check and the individual assertions it made.
struct CheckResult {
  std::string name;
  std::string summary;
  std::vector<CheckItem> items;

  bool passed() const noexcept;
};

struct VerifyConfig {
  /// Corpus horizon; checks that need a fixed size use their own.
  std::uint64_t horizon = (std::uint64_t{1} << 16) + 1;
  std::uint64_t seed = 1;
  std::uint64_t sim_trials = 10000;
};

/// density-oracle, compactness, class-parity, prop1, prop2, chain,
/// counterexample, uc, uniform-limit, simulators, image-compactness,
/// implications.
const std::vector<std::string>& check_names();

CheckResult run_check(std::string_view name, const VerifyConfig& cfg = {});

/// Runs the named checks in check_names() order, or all of them when
/// `filter` is empty; unknown names throw unknown-name before anything runs.
std::vector<CheckResult> verify_theorems(const std::vector<std::string>& filter,
                                         const VerifyConfig& cfg = {});

json to_json(const CheckResult& r);

/// The ten candidate functions the chain check runs.
std::vector<RealFunction> chain_functions();

/// Counts of the predicate for k <= n at every n in 2..n_max, one k at a
/// time with no shared state; the reference the kernels are checked against.
std::vector<std::uint64_t> brute_force_counts(std::span<const double> values, Predicate predicate,
                                              double eps, double level, std::uint64_t n_max);

}  // namespace rhostat
