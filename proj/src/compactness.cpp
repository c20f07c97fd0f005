#include "rhostat/compactness.hpp"

#include <algorithm>
#include <cmath>

#include "rhostat/error.hpp"

namespace rhostat {

const char* to_string(WitnessKind kind) noexcept {
  switch (kind) {
    case WitnessKind::DownwardSubsequence: return "DownwardSubsequence";
    case WitnessKind::DivergingConstruction: return "DivergingConstruction";
  }
  return "unknown";
}

const char* to_string(ExtractionMethod method) noexcept {
  switch (method) {
    case ExtractionMethod::SteepDescent: return "steep-descent";
    case ExtractionMethod::MonotoneBounded: return "monotone-bounded";
    case ExtractionMethod::Construction: return "construction";
  }
  return "unknown";
}

void SampleSet::validate() const {
  if (points.empty()) fail(ErrorCode::DegenerateInput, "sample set '" + generator + "' is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]))
      throw IndexedError(ErrorCode::NonFiniteValue,
                         "sample set '" + generator + "' has a non-finite point", i + 1);
  }
}

BoundCheck bounded_above_check(const SampleSet& set, double bound_probe) {
  set.validate();
  const double sup = *std::max_element(set.points.begin(), set.points.end());
  return {sup <= bound_probe, sup};
}

std::vector<std::uint64_t> descent_indices(std::span<const double> values,
                                           const WeightSequence& weights) {
  std::vector<std::uint64_t> picked;
  std::size_t i = 0;
  while (i < values.size() && !(values[i] < 0.0)) ++i;
  if (i == values.size()) return picked;
  picked.push_back(i + 1);
  double current = values[i];
  // k indexes the pick being made next; rho_{k+1} in 1-based terms.
  for (std::size_t j = i + 1; j < values.size(); ++j) {
    const std::uint64_t k = picked.size();
    if (k + 1 > weights.horizon()) break;
    if (values[j] < current - weights.at(k + 1)) {
      picked.push_back(j + 1);
      current = values[j];
    }
  }
  return picked;
}

std::vector<std::uint64_t> monotone_indices(std::span<const double> values) {
  // tails[l]: position of the last term of the best length-(l+1) chain, i.e.
  // the one with the largest last value. Non-increasing in v is
  // non-decreasing in -v, hence upper_bound.
  std::vector<std::size_t> tails;
  std::vector<std::ptrdiff_t> parent(values.size(), -1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = std::upper_bound(tails.begin(), tails.end(), i, [&](std::size_t a, std::size_t b) {
      return values[a] > values[b];
    });
    if (it != tails.begin()) parent[i] = static_cast<std::ptrdiff_t>(*(it - 1));
    if (it == tails.end()) tails.push_back(i);
    else *it = i;
  }
  std::vector<std::uint64_t> picked;
  if (tails.empty()) return picked;
  for (auto at = static_cast<std::ptrdiff_t>(tails.back()); at >= 0;
       at = parent[static_cast<std::size_t>(at)])
    picked.push_back(static_cast<std::uint64_t>(at) + 1);
  std::reverse(picked.begin(), picked.end());
  return picked;
}

ClassifyConfig witness_config(const ClassifyConfig& base, std::uint64_t length) {
  ClassifyConfig cfg = base;
  cfg.n_max = 0;
  cfg.n_grid = default_n_grid(length == 0 ? 0 : length - 1);
  return cfg;
}

namespace {

Witness make_witness(const SequenceSource& seq, const WeightSequence& weights,
                     std::vector<std::uint64_t> picked, ExtractionMethod method,
                     const ExtractConfig& cfg) {
  Witness w;
  w.kind = WitnessKind::DownwardSubsequence;
  w.method = method;
  w.indices = IndexSubsequence(std::move(picked));
  const SequenceSource sub = take_subsequence(seq, w.indices);
  w.label = sub.label();
  w.values = eval_prefix(sub, sub.horizon());
  w.verification = classify(sub, weights, ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy),
                            witness_config(cfg.classify, sub.horizon()));
  return w;
}

}  // namespace

Witness extract_downward_witness(const SequenceSource& seq, const WeightSequence& weights,
                                 const ExtractConfig& cfg) {
  if (seq.horizon() < kMinExtractHorizon) {
    fail(ErrorCode::InsufficientEvidence,
         "witness extraction needs at least " + std::to_string(kMinExtractHorizon) +
             " terms; '" + seq.label() + "' has " + std::to_string(seq.horizon()));
  }
  const Prefix p = seq.prefix(seq.horizon());

  auto descent = descent_indices(p.values, weights);
  if (descent.size() >= cfg.min_length)
    return make_witness(seq, weights, std::move(descent), ExtractionMethod::SteepDescent, cfg);

  const double sup = kernels::extent(p.values).max;
  std::size_t monotone_length = 0;
  if (sup <= cfg.bound_probe) {
    auto monotone = monotone_indices(p.values);
    monotone_length = monotone.size();
    if (monotone.size() >= cfg.min_length)
      return make_witness(seq, weights, std::move(monotone), ExtractionMethod::MonotoneBounded, cfg);
  }
  fail(ErrorCode::NoWitness,
       "no downward witness in '" + seq.label() + "': steep descent found " +
           std::to_string(descent.size()) + " terms, monotone extraction " +
           (sup <= cfg.bound_probe ? "found " + std::to_string(monotone_length) + " terms"
                                   : std::string("skipped (sample max above the probe)")) +
           ", need " + std::to_string(cfg.min_length));
}

SequenceSource construct_escaping_sequence(double start, const WeightSequence& weights,
                                           std::uint64_t length) {
  if (length < 2) fail(ErrorCode::DegenerateInput, "an escaping sequence needs length >= 2");
  return SequenceSource::recurrence(
      {start},
      [&weights](std::uint64_t k, std::span<const double> prev) {
        return prev[k - 2] + weights.at(k - 1) + 1.0;
      },
      length, "escape(" + weights.description() + ")");
}

Witness escaping_witness(double start, const WeightSequence& weights, std::uint64_t length,
                         const ClassifyConfig& cfg) {
  const SequenceSource seq = construct_escaping_sequence(start, weights, length);
  Witness w;
  w.kind = WitnessKind::DivergingConstruction;
  w.method = ExtractionMethod::Construction;
  w.label = seq.label();
  w.values = eval_prefix(seq, seq.horizon());
  w.verification = classify(seq, weights, ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy),
                            witness_config(cfg, length));
  return w;
}

SequenceSource construct_descent_sequence(const WeightSequence& weights, std::uint64_t length) {
  if (length < 1) fail(ErrorCode::DegenerateInput, "a descent sequence needs length >= 1");
  return SequenceSource::recurrence(
      {-(weights.at(1) + 1.0)},
      [&weights](std::uint64_t k, std::span<const double> prev) {
        return prev[k - 2] - (weights.at(k) + 1.0);
      },
      length, "descent(" + weights.description() + ")");
}

}  // namespace rhostat
