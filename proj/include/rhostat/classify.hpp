#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhostat/density.hpp"
#include "rhostat/sequence.hpp"
#include "rhostat/weights.hpp"

namespace rhostat {

enum class ClassKind {
  QuasiCauchy,                      // Delta alpha_k -> 0, pointwise
  DownwardQuasiCauchy,              // one-sided pointwise variant
  RhoStatQuasiCauchy,               // |Delta alpha_k| >= eps has rho-density 0
  RhoStatDownwardQuasiCauchy,       // Delta alpha_k >= eps has rho-density 0
  RhoStatConvergent,                // |alpha_k - L| >= eps has rho-density 0
  DownwardHalfCauchy,               // alpha_q - alpha_p < eps for q >= p in the tail
  LacunaryStatDownwardQuasiCauchy,  // windowed downward density over theta
};

const char* to_string(ClassKind kind) noexcept;

/// Parses the CLI names: qc, downward-qc, rho-qc, rho-downward, rho-convergent,
/// half-cauchy, lacunary-downward.
ClassKind parse_class_kind(std::string_view name);
const char* cli_name(ClassKind kind) noexcept;

struct ClassTag {
  ClassKind kind = ClassKind::RhoStatDownwardQuasiCauchy;
  std::optional<double> level;                // RhoStatConvergent only
  std::optional<std::vector<std::uint64_t>> theta;  // lacunary only; k_0 = 0 first

  static ClassTag of(ClassKind kind) { return ClassTag{kind, std::nullopt, std::nullopt}; }
  static ClassTag convergent(double level) {
    return ClassTag{ClassKind::RhoStatConvergent, level, std::nullopt};
  }
  static ClassTag lacunary(std::vector<std::uint64_t> theta) {
    return ClassTag{ClassKind::LacunaryStatDownwardQuasiCauchy, std::nullopt, std::move(theta)};
  }
  std::string describe() const;
};

struct ClassifyConfig {
  Tolerances tolerances;
  std::vector<double> eps_grid = default_eps_grid();
  /// Explicit checkpoints; when empty the default grid up to n_max is used.
  std::vector<std::uint64_t> n_grid;
  /// Largest checkpoint; 0 means as far as source and weights allow.
  std::uint64_t n_max = 0;
  /// Fraction of the prefix treated as the tail by the pointwise classes.
  double tail_fraction = 0.5;
};

/// Minimum prefix length the pointwise classes accept.
inline constexpr std::uint64_t kMinTailHorizon = 64;

Verdict classify(const SequenceSource& source, const WeightSequence& weights, const ClassTag& tag,
                 const ClassifyConfig& cfg = {});

/// Checkpoint grid classify() would use for a weighted density class.
std::vector<std::uint64_t> resolve_grid(const SequenceSource& source,
                                        const WeightSequence& weights, Predicate predicate,
                                        const ClassifyConfig& cfg);

/// Median of the last half of the prefix used by classify(); the level the
/// convergence check tests against when none is given.
double estimate_level(const SequenceSource& source, const ClassifyConfig& cfg = {});

struct Implication {
  ClassKind upstream;
  ClassKind downstream;
};

/// The one-way implications the implication report checks.
const std::vector<Implication>& known_implications();

struct Anomaly {
  ClassKind upstream;
  ClassKind downstream;
  std::string detail;
};

struct ClassRow {
  ClassTag tag;
  Verdict verdict;
};

struct ImplicationReport {
  std::string label;
  double level = 0.0;
  std::vector<ClassRow> rows;
  std::vector<Anomaly> anomalies;

  const Verdict& verdict(ClassKind kind) const;
};

/// Runs every non-lacunary classifier and lists each implication whose
/// upstream class accepts while its downstream class rejects.
ImplicationReport implication_report(const SequenceSource& source, const WeightSequence& weights,
                                     const ClassifyConfig& cfg = {});

}  // namespace rhostat
