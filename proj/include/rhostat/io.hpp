#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rhostat/classify.hpp"
#include "rhostat/compactness.hpp"
#include "rhostat/density.hpp"
#include "rhostat/funcanalysis.hpp"
#include "rhostat/sequence.hpp"
#include "rhostat/simulate.hpp"
#include "rhostat/weights.hpp"

namespace rhostat {

using json = nlohmann::ordered_json;

/// One number per non-blank line; '#' starts a comment line. Throws
/// parse-error with the line number on anything else.
std::vector<double> read_value_column(const std::string& path);
std::vector<double> parse_value_column(std::istream& in, const std::string& name);

void write_sequence_csv(std::ostream& out, const SequenceSource& source);
json sequence_to_json(const SequenceSource& source);
/// Accepts {"label", "values": [...]}.
SequenceSource sequence_from_json(const json& j);

/// Sequence specs: expr:<expression in k>, table:<path> or csv:<path> (one
/// value per line), json:<path>, builtin:<name>. `horizon` bounds expressions
/// and builtins; stored inputs keep their own length.
SequenceSource parse_sequence_spec(std::string_view spec, std::uint64_t horizon,
                                   std::uint64_t seed);

struct CorpusFileEntry {
  std::string label;
  std::string source;
};

/// [{"label": ..., "source": <sequence spec>}, ...]
std::vector<CorpusFileEntry> read_corpus_file(const std::string& path);

json read_json_file(const std::string& path);

json to_json(const DensityProfile& p);
json to_json(const Verdict& v);
json to_json(const ConditionReport& r);
json to_json(const ImplicationReport& r);
json to_json(const Witness& w);
json to_json(const PreservationReport& r);
json to_json(const InequalityCheck& c);
json to_json(const ClosureReport& r);
json to_json(const ChainReport& r);
json to_json(const ImageCompactnessReport& r);
json to_json(const UcCounterexample& c);
json to_json(const UcImageReport& r);
json to_json(const UniformLimitReport& r);
json to_json(const SimulatedSequence& s);

DensityProfile profile_from_json(const json& j);

/// Profiles found in a document: a profile object, an array of them, or any
/// object with "profiles" or "evidence" arrays (searched recursively).
std::vector<DensityProfile> profiles_in(const json& doc);

/// Header "eps,n,density", one row per checkpoint.
void write_profiles_csv(std::ostream& out, const std::vector<DensityProfile>& profiles);

}  // namespace rhostat
