#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rhostat {

enum class WeightKind { Statistical, ClosedForm, Table };

const char* to_string(WeightKind kind) noexcept;

/// The density normalizers rho_1, rho_2, ... up to a declared horizon.
///
/// Construction validates positivity and monotonicity over the whole horizon,
/// so any instance can be read without further checks. Immutable; copies share
/// storage.
class WeightSequence {
 public:
  /// rho_n = n.
  static WeightSequence statistical(std::uint64_t horizon);

  /// rho_n = fn(n) for n <= horizon, with individual terms optionally pinned
  /// through `overrides` (1-based index -> value).
  static WeightSequence closed_form(std::function<double(double)> fn, std::uint64_t horizon,
                                    const std::map<std::uint64_t, double>& overrides,
                                    std::string description);

  /// rho_n = values[n-1]; the horizon is the table length.
  static WeightSequence table(std::vector<double> values, std::string description);

  /// rho_n; throws horizon-exceeded beyond horizon().
  double at(std::uint64_t n) const;
  double operator()(std::uint64_t n) const { return at(n); }

  std::uint64_t horizon() const noexcept { return horizon_; }
  WeightKind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }

 private:
  WeightSequence(WeightKind kind, std::uint64_t horizon, std::string description,
                 std::shared_ptr<const std::vector<double>> values);

  WeightKind kind_;
  std::uint64_t horizon_;
  std::string description_;
  std::shared_ptr<const std::vector<double>> values_;  // null for Statistical
};

/// Parsed form of the weight grammar: `statistical`, `expr:<expr in n>` with
/// optional `;<index>=<value>` pins, or `table:<path>`.
struct WeightSpec {
  WeightKind kind = WeightKind::Statistical;
  std::string expression;
  std::map<std::uint64_t, double> overrides;
  std::string table_path;
  std::vector<double> table_values;  // used when table_path is empty
  std::string text;
};

WeightSpec parse_weight_spec(std::string_view text);

WeightSequence make_weights(const WeightSpec& spec, std::uint64_t horizon);
WeightSequence make_weights(std::string_view text, std::uint64_t horizon);

struct ConditionBounds {
  double ratio_bound = 10.0;      // B: max rho_n / n
  double increment_bound = 10.0;  // C: max (rho_{n+1} - rho_n)
  /// Lower bound rho_horizon must reach; defaults to log(horizon).
  std::function<double(std::uint64_t)> divergence_floor;
};

struct ConditionFlag {
  bool passed = true;
  std::optional<std::uint64_t> witness;  // first violating index, if any
  double observed = 0.0;                 // the extreme value seen
};

/// Prefix-level proxies for the asymptotic weight conditions.
struct ConditionReport {
  std::uint64_t horizon = 0;
  ConditionBounds bounds;
  ConditionFlag non_decreasing;
  ConditionFlag divergent;
  ConditionFlag ratio_bounded;
  ConditionFlag increment_bounded;

  bool all_passed() const noexcept {
    return non_decreasing.passed && divergent.passed && ratio_bounded.passed &&
           increment_bounded.passed;
  }
};

/// Needs rho on 1..horizon+1. Violations are report content, never errors.
ConditionReport check_conditions(const WeightSequence& weights, std::uint64_t horizon,
                                 const ConditionBounds& bounds = {});

}  // namespace rhostat
