#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhostat/classify.hpp"
#include "rhostat/compactness.hpp"
#include "rhostat/corpus.hpp"

namespace rhostat {

/// f on a closed domain [lo, hi], with an optional Lipschitz constant.
struct RealFunction {
  std::function<double(double)> eval;
  std::string label;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::optional<double> lipschitz;

  double operator()(double x) const { return eval(x); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

RealFunction identity_function();
RealFunction affine(double a, double b);
RealFunction constant_function(double c);
/// Linear interpolation through knots sorted by x, extended by the end
/// slopes; Lipschitz constant is the largest slope magnitude.
RealFunction piecewise_linear(std::vector<std::pair<double, double>> knots, std::string label);

RealFunction sum(const RealFunction& f, const RealFunction& g);
/// g(f(x)); the domain is f's.
RealFunction compose(const RealFunction& g, const RealFunction& f);
RealFunction scale(double c, const RealFunction& f);

/// Named built-ins: identity, neg, square, sin, cos, atan, tanh, abs,
/// softsign, affine:a,b, scale:c, const:c, clamp:lo,hi, lipschitz-pwl:<path>
/// (CSV rows "x,y").
RealFunction parse_function(std::string_view spec);

enum class Preservation { Preserved, Violated, Inconclusive };

const char* to_string(Preservation p) noexcept;

/// Which statistical class a preservation test maps into itself.
enum class Property {
  Downward,   // rho-statistically downward quasi-Cauchy
  Ward,       // rho-statistically quasi-Cauchy
  Deviation,  // rho-statistically convergent, image level f(L)
};

const char* to_string(Property p) noexcept;

struct PreservationRow {
  std::string label;
  Verdict input;
  std::optional<Verdict> image;  // only for accepted inputs
};

struct PreservationReport {
  std::string function;
  Property property = Property::Downward;
  std::vector<PreservationRow> rows;
  Preservation summary = Preservation::Inconclusive;
  std::optional<std::string> witness;  // first input whose image rejects
};

/// Classifies every corpus input; for each accepted input also classifies
/// (f(alpha_k)). Violated when some accepted input has a rejected image,
/// Preserved when every accepted input has an accepted image.
PreservationReport test_preservation(const RealFunction& f, Property property,
                                     const Corpus& corpus, const WeightSequence& weights,
                                     const ClassifyConfig& cfg = {});

PreservationReport test_downward_continuity(const RealFunction& f, const Corpus& corpus,
                                            const WeightSequence& weights,
                                            const ClassifyConfig& cfg = {});
PreservationReport test_ward_continuity(const RealFunction& f, const Corpus& corpus,
                                        const WeightSequence& weights,
                                        const ClassifyConfig& cfg = {});

/// (f(alpha_k)) for k <= length (0: the whole horizon) as a stored sequence;
/// throws domain-violation naming the sequence and value when alpha leaves
/// f's domain.
SequenceSource apply(const RealFunction& f, const SequenceSource& alpha, std::uint64_t length = 0);

/// Tally of an integer count inequality checked at many checkpoints.
struct InequalityCheck {
  std::uint64_t comparisons = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool holds() const noexcept { return failures == 0; }
};

/// count_{f+g}(eps) <= count_f(eps/2) + count_g(eps/2) for the downward
/// predicate at every checkpoint, every epsilon, every corpus member.
InequalityCheck sum_count_inequality(const RealFunction& f, const RealFunction& g,
                                     const Corpus& corpus, const WeightSequence& weights,
                                     const ClassifyConfig& cfg = {});

struct ClosureReport {
  bool precondition_met = false;  // f and g each Preserved
  PreservationReport f, g, sum, composition;
  InequalityCheck sum_inequality;
};

ClosureReport closure_harness(const RealFunction& f, const RealFunction& g, const Corpus& corpus,
                              const WeightSequence& weights, const ClassifyConfig& cfg = {});

struct InterleaveRow {
  std::string label;
  std::string construction;  // "zigzag" or "limit"
  Verdict interleaved;       // downward class of the interleaving
  Verdict image;             // downward class of f applied to it
};

struct ChainReport {
  PreservationReport downward, ward, deviation;
  std::vector<InterleaveRow> interleavings;
  /// Downward Preserved implies ward and deviation not Violated, and no
  /// interleaving or its image rejects. Vacuous when downward is not Preserved.
  bool consistent = true;
};

/// Zigzag interleavings are built from ward-accepted inputs and limit
/// interleavings from deviation-accepted inputs, then classified with f
/// applied, the way the implication proofs use them.
ChainReport chain_check(const RealFunction& f, const Corpus& corpus, const WeightSequence& weights,
                        const ClassifyConfig& cfg = {});

struct ImageWitnessRow {
  std::string label;
  Witness witness;
  Verdict image;
};

struct ImageCompactnessReport {
  bool skipped = false;
  std::string reason;
  std::vector<ImageWitnessRow> rows;
};

/// For f passing test_downward_continuity on `corpus`: extract a downward
/// witness from each sample, map it through f, and classify the image.
ImageCompactnessReport image_compactness_check(const RealFunction& f,
                                               const std::vector<SequenceSource>& samples,
                                               const Corpus& corpus,
                                               const WeightSequence& weights,
                                               const ExtractConfig& cfg = {});

struct DomainSampler {
  double lo = 0.0;
  double hi = 1.0;
};

struct FalsifyConfig {
  std::vector<double> eps0_grid{1.0, 0.5, 0.1};
  std::uint64_t pairs = 4096;        // number of n = 1..pairs
  std::uint64_t draws_per_n = 1000;  // random pair draws per n
  std::uint64_t refine_rounds = 10;  // x10 grid refinement steps around the best pair
  std::uint64_t seed = 1;
  ClassifyConfig classify;
};

struct UcCounterexample {
  double eps0 = 0.0;
  std::vector<double> alpha, beta;  // |alpha_n - beta_n| < 1/n, f(alpha_n) - f(beta_n) >= eps0
  IndexSubsequence selected;        // n_k with alpha_{n_k} non-increasing
  SequenceSource interleaved;       // (beta_{n_1}, alpha_{n_1}, beta_{n_2}, alpha_{n_2}, ...)
  Verdict input;                    // downward class of the interleaving
  Verdict image;                    // downward class of its image
};

/// Searches for pairs closer than 1/n whose images differ by eps0, for every
/// n up to cfg.pairs; returns nullopt when no eps0 in the grid succeeds.
std::optional<UcCounterexample> falsify_uniform_continuity(const RealFunction& f,
                                                           const DomainSampler& sampler,
                                                           const WeightSequence& weights,
                                                           const FalsifyConfig& cfg = {});

/// Last k <= n_max with |Delta alpha_k| >= delta, or 0.
std::uint64_t quasi_cauchy_tail_index(const SequenceSource& alpha, double delta,
                                      std::uint64_t n_max);

struct UcBound {
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t k0 = 0;
  InequalityCheck check;  // downward count of the image <= k0
};

struct UcImageRow {
  std::string label;
  Verdict input;  // QuasiCauchy
  std::optional<Verdict> image;
  std::vector<UcBound> bounds;  // empty without a Lipschitz hint
};

struct UcImageReport {
  std::string function;
  bool bound_checked = false;
  std::vector<UcImageRow> rows;

  bool passed() const;
};

UcImageReport uc_image_check(const RealFunction& f, const std::vector<SequenceSource>& qc_corpus,
                             const WeightSequence& weights, const ClassifyConfig& cfg = {});

/// f_n converging uniformly to `limit` with sup |f_n - f| <= error_bound(n).
struct FunctionFamily {
  std::string label;
  std::function<RealFunction(std::uint64_t)> member;
  RealFunction limit;
  std::function<double(std::uint64_t)> error_bound;
};

/// f_n(x) = x + 1/n.
FunctionFamily shift_family();
/// Bernstein polynomials of g on [0, 1]; the bound M / (8n) needs |g''| <= M.
FunctionFamily bernstein_family(const RealFunction& g, double second_derivative_bound);
/// f_n(x) = min(x^2, n) on [-b, b]; equal to x^2 there once n >= b^2.
FunctionFamily clipped_square_family(double b);

struct UniformLimitRow {
  double epsilon = 0.0;
  std::uint64_t n = 0;  // chosen N with u(N) < eps/3
  double error = 0.0;   // u(N)
  InequalityCheck inequality;  // count_f(eps) <= count_{f_N}(eps/3)
};

struct UniformLimitReport {
  std::string family;
  std::vector<UniformLimitRow> rows;
  PreservationReport member;  // f_N at the smallest epsilon
  PreservationReport limit;

  bool passed() const;
};

UniformLimitReport uniform_limit_check(const FunctionFamily& family, const Corpus& corpus,
                                       const WeightSequence& weights,
                                       const ClassifyConfig& cfg = {});

}  // namespace rhostat
