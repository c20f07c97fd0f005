#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rhostat/classify.hpp"
#include "rhostat/sequence.hpp"
#include "rhostat/weights.hpp"

namespace rhostat {

/// A finite sample drawn from some set E of reals.
struct SampleSet {
  std::vector<double> points;
  std::string generator;
  std::optional<double> bounded_above_hint;

  /// Throws degenerate-input when empty, non-finite-value on NaN/inf.
  void validate() const;
};

struct BoundCheck {
  bool bounded = false;  // sample max <= probe
  double sup = 0.0;      // sample max
};

BoundCheck bounded_above_check(const SampleSet& set, double bound_probe);

enum class WitnessKind { DownwardSubsequence, DivergingConstruction };
enum class ExtractionMethod { SteepDescent, MonotoneBounded, Construction };

const char* to_string(WitnessKind kind) noexcept;
const char* to_string(ExtractionMethod method) noexcept;

struct Witness {
  WitnessKind kind = WitnessKind::DownwardSubsequence;
  ExtractionMethod method = ExtractionMethod::MonotoneBounded;
  std::string label;
  IndexSubsequence indices;   // empty for constructions
  std::vector<double> values;
  Verdict verification;
};

struct ExtractConfig {
  ClassifyConfig classify;
  /// Monotone extraction is only tried when the sample max is at most this.
  double bound_probe = std::numeric_limits<double>::infinity();
  /// Shortest subsequence accepted as a witness.
  std::size_t min_length = 16;
};

/// Inputs shorter than this are rejected.
inline constexpr std::uint64_t kMinExtractHorizon = 64;

/// Steep descent: n_1 is the first index with alpha < 0, then each n_{k+1}
/// is the first later index with alpha_{n_{k+1}} < alpha_{n_k} - rho_{k+1}.
std::vector<std::uint64_t> descent_indices(std::span<const double> values,
                                           const WeightSequence& weights);

/// 1-based indices of a longest non-increasing subsequence (patience
/// sorting; among equally long ones, the one ending earliest).
std::vector<std::uint64_t> monotone_indices(std::span<const double> values);

/// Tries steep descent, then monotone extraction; verifies the result with the
/// downward classifier. Throws no-witness when neither yields min_length terms.
Witness extract_downward_witness(const SequenceSource& seq, const WeightSequence& weights,
                                 const ExtractConfig& cfg = {});

/// alpha_1 = start, alpha_{k+1} = alpha_k + rho_k + 1.
SequenceSource construct_escaping_sequence(double start, const WeightSequence& weights,
                                           std::uint64_t length);

/// The escaping construction with its downward classification attached.
Witness escaping_witness(double start, const WeightSequence& weights, std::uint64_t length,
                         const ClassifyConfig& cfg = {});

/// alpha_k = -sum_{j <= k} (rho_j + 1): already a steep descent.
SequenceSource construct_descent_sequence(const WeightSequence& weights, std::uint64_t length);

/// Checkpoints scaled to a witness of the given length.
ClassifyConfig witness_config(const ClassifyConfig& base, std::uint64_t length);

}  // namespace rhostat
