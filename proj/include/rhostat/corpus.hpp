#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhostat/density.hpp"
#include "rhostat/sequence.hpp"

namespace rhostat {

/// A corpus member. Simulated members carry widened tolerances because their
/// difference sequences are Monte Carlo noise at small scales.
struct CorpusEntry {
  SequenceSource source;
  std::optional<Tolerances> tolerances;
};

using Corpus = std::vector<CorpusEntry>;

struct CorpusOptions {
  std::uint64_t horizon = (std::uint64_t{1} << 20) + 1;
  std::uint64_t seed = 1;
  std::uint64_t sim_max_n = 128;
  std::uint64_t sim_trials = 10000;
  double sim_tau_accept = 0.05;
};

/// Constants, sqrt k, -k, k, (-1)^k, the escaping and descent constructions
/// for rho_n = n, and both simulated processes.
Corpus make_default_corpus(const CorpusOptions& options = {});

/// make_default_corpus() with default options, built once per process.
const Corpus& default_corpus();

/// Names accepted by builtin_sequence().
std::vector<std::string> builtin_names();

/// One named corpus member at the given horizon (max_n for simulations).
SequenceSource builtin_sequence(std::string_view name, std::uint64_t horizon, std::uint64_t seed);

std::vector<SequenceSource> sources(const Corpus& corpus);

}  // namespace rhostat
