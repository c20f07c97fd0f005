#include "rhostat/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "rhostat/compactness.hpp"
#include "rhostat/error.hpp"
#include "rhostat/simulate.hpp"

namespace rhostat {

namespace {

const char* const kBuiltins[] = {"const", "sqrt", "neg", "id", "alt",
                                 "escape", "descent", "pairing", "ternary"};

constexpr std::uint64_t kSimTrials = 10000;

SequenceSource closed(std::string_view name, std::uint64_t horizon) {
  if (name == "const") return SequenceSource::constant(2.0, horizon).relabeled("const");
  if (name == "sqrt")
    return SequenceSource::from_generator([](std::uint64_t k) { return std::sqrt(static_cast<double>(k)); },
                                          horizon, "sqrt");
  if (name == "neg")
    return SequenceSource::from_generator([](std::uint64_t k) { return -static_cast<double>(k); },
                                          horizon, "neg");
  if (name == "id")
    return SequenceSource::from_generator([](std::uint64_t k) { return static_cast<double>(k); },
                                          horizon, "id");
  if (name == "alt")
    return SequenceSource::from_generator([](std::uint64_t k) { return k % 2 == 0 ? 1.0 : -1.0; },
                                          horizon, "alt");
  const auto rho = WeightSequence::statistical(horizon + 1);
  if (name == "escape") return construct_escaping_sequence(0.0, rho, horizon).relabeled("escape");
  if (name == "descent") return construct_descent_sequence(rho, horizon).relabeled("descent");
  fail(ErrorCode::UnknownName, "unknown builtin sequence '" + std::string(name) + "'");
}

SimConfig sim_config(std::uint64_t max_n, std::uint64_t trials, std::uint64_t seed) {
  SimConfig cfg;
  cfg.max_n = max_n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.exact_cutoff = std::min<std::uint64_t>(8, max_n);
  return cfg;
}

// Ternary groups up to the exact limit read their round count from the
// exact distribution instead of being split further.
SimConfig ternary_config(SimConfig cfg) {
  cfg.exact_cutoff = std::min(kTernaryExactLimit, cfg.max_n);
  return cfg;
}

}  // namespace

std::vector<std::string> builtin_names() { return {std::begin(kBuiltins), std::end(kBuiltins)}; }

SequenceSource builtin_sequence(std::string_view name, std::uint64_t horizon, std::uint64_t seed) {
  if (name == "pairing")
    return pairing_survivor_sequence(sim_config(horizon, kSimTrials, seed)).source.relabeled("pairing");
  if (name == "ternary")
    return ternary_split_sequence(ternary_config(sim_config(horizon, kSimTrials, seed)))
        .source.relabeled("ternary");
  return materialize(closed(name, horizon));
}

Corpus make_default_corpus(const CorpusOptions& options) {
  Corpus corpus;
  for (const char* name : {"const", "sqrt", "neg", "id", "alt", "escape", "descent"})
    corpus.push_back({materialize(closed(name, options.horizon)), std::nullopt});

  Tolerances widened;
  widened.accept = options.sim_tau_accept;
  const auto cfg = sim_config(options.sim_max_n, options.sim_trials, options.seed);
  corpus.push_back({pairing_survivor_sequence(cfg).source.relabeled("pairing"), widened});
  corpus.push_back({ternary_split_sequence(ternary_config(cfg)).source.relabeled("ternary"), widened});
  return corpus;
}

const Corpus& default_corpus() {
  static std::once_flag once;
  static Corpus corpus;
  std::call_once(once, [] { corpus = make_default_corpus(); });
  return corpus;
}

std::vector<SequenceSource> sources(const Corpus& corpus) {
  std::vector<SequenceSource> out;
  out.reserve(corpus.size());
  for (const auto& e : corpus) out.push_back(e.source);
  return out;
}

}  // namespace rhostat
