#include "rhostat/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rhostat/corpus.hpp"
#include "rhostat/error.hpp"

namespace rhostat {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// JSON has no infinities; they travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double read_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(ErrorCode::ParseError, std::string("expected a number for '") + what + "'");
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

Predicate parse_predicate(const std::string& s) {
  for (auto p : {Predicate::Downward, Predicate::Absolute, Predicate::Deviation, Predicate::Reversed})
    if (s == kernels::to_string(p)) return p;
  fail(ErrorCode::ParseError, "unknown predicate '" + s + "'");
}

json flag_json(const ConditionFlag& f) {
  json j;
  j["passed"] = f.passed;
  j["witness"] = f.witness ? json(*f.witness) : json(nullptr);
  j["observed"] = number(f.observed);
  return j;
}

json optional_verdict(const std::optional<Verdict>& v) {
  return v ? to_json(*v) : json(nullptr);
}

}  // namespace

// --- value columns and sequences -------------------------------------------------

std::vector<double> parse_value_column(std::istream& in, const std::string& name) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(body, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != body.size()) {
      throw IndexedError(ErrorCode::ParseError,
                         name + ":" + std::to_string(line_no) + ": not a number: '" + body + "'",
                         line_no);
    }
    values.push_back(v);
  }
  return values;
}

std::vector<double> read_value_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_value_column(in, path);
}

void write_sequence_csv(std::ostream& out, const SequenceSource& source) {
  const Prefix p = source.prefix(source.horizon());
  std::ostringstream buf;
  buf.precision(17);
  for (const double v : p.values) buf << v << '\n';
  out << buf.str();
}

json sequence_to_json(const SequenceSource& source) {
  const Prefix p = source.prefix(source.horizon());
  json j;
  j["label"] = source.label();
  j["values"] = json::array();
  for (const double v : p.values) j["values"].push_back(number(v));
  return j;
}

SequenceSource sequence_from_json(const json& j) {
  const json& values = member(j, "values");
  if (!values.is_array()) fail(ErrorCode::ParseError, "'values' must be an array");
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(read_number(v, "values"));
  std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>()
                                                                      : std::string("json");
  return SequenceSource::table(std::move(out), std::move(label));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, path + ": malformed JSON: " + e.what());
  }
}

SequenceSource parse_sequence_spec(std::string_view spec, std::uint64_t horizon,
                                   std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    fail(ErrorCode::ParseError, "sequence spec '" + std::string(spec) +
                                    "' needs a prefix: expr:, table:, csv:, json:, builtin:");
  const std::string_view head = spec.substr(0, colon);
  const std::string body(spec.substr(colon + 1));
  if (body.empty()) fail(ErrorCode::ParseError, "empty sequence spec '" + std::string(spec) + "'");
  if (head == "expr") return materialize(SequenceSource::closed_form(body, horizon, std::string(spec)));
  if (head == "table" || head == "csv")
    return SequenceSource::table(read_value_column(body), std::string(spec));
  if (head == "json") return sequence_from_json(read_json_file(body));
  if (head == "builtin") return builtin_sequence(body, horizon, seed);
  fail(ErrorCode::ParseError, "unknown sequence spec prefix '" + std::string(head) + "'");
}

std::vector<CorpusFileEntry> read_corpus_file(const std::string& path) {
  const json doc = read_json_file(path);
  if (!doc.is_array()) fail(ErrorCode::ParseError, path + ": a corpus file is a JSON array");
  std::vector<CorpusFileEntry> out;
  for (const auto& e : doc) {
    const json& src = member(e, "source");
    if (!src.is_string()) fail(ErrorCode::ParseError, path + ": 'source' must be a string");
    std::string label = e.contains("label") ? e["label"].get<std::string>() : src.get<std::string>();
    out.push_back({std::move(label), src.get<std::string>()});
  }
  return out;
}

// --- reports -------------------------------------------------------------------------

json to_json(const DensityProfile& p) {
  json j;
  j["epsilon"] = number(p.epsilon);
  j["predicate"] = kernels::to_string(p.predicate);
  j["level"] = p.level ? number(*p.level) : json(nullptr);
  j["normalization"] = to_string(p.normalization);
  json cps = json::array();
  for (const auto& c : p.checkpoints)
    cps.push_back({{"n", c.n}, {"count", c.count}, {"denominator", number(c.denominator)},
                   {"density", number(c.density)}});
  j["checkpoints"] = std::move(cps);
  return j;
}

DensityProfile profile_from_json(const json& j) {
  DensityProfile p;
  p.epsilon = read_number(member(j, "epsilon"), "epsilon");
  if (j.contains("predicate")) p.predicate = parse_predicate(j["predicate"].get<std::string>());
  if (j.contains("level") && !j["level"].is_null()) p.level = read_number(j["level"], "level");
  if (j.contains("normalization") && j["normalization"] == "window")
    p.normalization = Normalization::Window;
  const json& cps = member(j, "checkpoints");
  if (!cps.is_array()) fail(ErrorCode::ParseError, "'checkpoints' must be an array");
  for (const auto& c : cps) {
    Checkpoint cp;
    cp.n = member(c, "n").get<std::uint64_t>();
    cp.density = read_number(member(c, "density"), "density");
    if (c.contains("count")) cp.count = c["count"].get<std::uint64_t>();
    if (c.contains("denominator")) cp.denominator = read_number(c["denominator"], "denominator");
    p.checkpoints.push_back(cp);
  }
  return p;
}

std::vector<DensityProfile> profiles_in(const json& doc) {
  std::vector<DensityProfile> out;
  const auto walk = [&](const auto& self, const json& j) -> void {
    if (j.is_object()) {
      if (j.contains("epsilon") && j.contains("checkpoints")) {
        out.push_back(profile_from_json(j));
        return;
      }
      for (const auto& [key, value] : j.items()) self(self, value);
    } else if (j.is_array()) {
      for (const auto& value : j) self(self, value);
    }
  };
  walk(walk, doc);
  return out;
}

void write_profiles_csv(std::ostream& out, const std::vector<DensityProfile>& profiles) {
  std::ostringstream buf;
  buf.precision(10);
  buf << "eps,n,density\n";
  for (const auto& p : profiles)
    for (const auto& c : p.checkpoints) buf << p.epsilon << ',' << c.n << ',' << c.density << '\n';
  out << buf.str();
}

json to_json(const Verdict& v) {
  json j;
  j["outcome"] = to_string(v.outcome);
  j["tolerances"] = {{"accept", v.tolerances.accept}, {"reject", v.tolerances.reject}};
  json per = json::array();
  for (const auto o : v.per_profile) per.push_back(to_string(o));
  j["per_profile"] = std::move(per);
  json stats = json::object();
  for (const auto& [name, value] : v.statistics) stats[name] = number(value);
  j["statistics"] = std::move(stats);
  j["narrative"] = v.narrative;
  json ev = json::array();
  for (const auto& p : v.evidence) ev.push_back(to_json(p));
  j["evidence"] = std::move(ev);
  return j;
}

json to_json(const ConditionReport& r) {
  json j;
  j["horizon"] = r.horizon;
  j["all_passed"] = r.all_passed();
  j["bounds"] = {{"ratio", r.bounds.ratio_bound}, {"increment", r.bounds.increment_bound}};
  j["non_decreasing"] = flag_json(r.non_decreasing);
  j["divergent"] = flag_json(r.divergent);
  j["ratio_bounded"] = flag_json(r.ratio_bounded);
  j["increment_bounded"] = flag_json(r.increment_bounded);
  return j;
}

json to_json(const ImplicationReport& r) {
  json j;
  j["label"] = r.label;
  j["level"] = number(r.level);
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"class", cli_name(row.tag.kind)}, {"tag", row.tag.describe()},
                    {"verdict", to_json(row.verdict)}});
  j["rows"] = std::move(rows);
  json an = json::array();
  for (const auto& a : r.anomalies)
    an.push_back({{"upstream", cli_name(a.upstream)}, {"downstream", cli_name(a.downstream)},
                  {"detail", a.detail}});
  j["anomalies"] = std::move(an);
  return j;
}

json to_json(const Witness& w) {
  json j;
  j["kind"] = to_string(w.kind);
  j["method"] = to_string(w.method);
  j["label"] = w.label;
  j["length"] = w.values.size();
  j["indices"] = std::vector<std::uint64_t>(w.indices.indices().begin(), w.indices.indices().end());
  json values = json::array();
  for (const double v : w.values) values.push_back(number(v));
  j["values"] = std::move(values);
  j["verification"] = to_json(w.verification);
  return j;
}

json to_json(const PreservationReport& r) {
  json j;
  j["function"] = r.function;
  j["property"] = to_string(r.property);
  j["summary"] = to_string(r.summary);
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"input", to_string(row.input.outcome)},
                    {"image", row.image ? json(to_string(row.image->outcome)) : json(nullptr)},
                    {"input_verdict", to_json(row.input)},
                    {"image_verdict", optional_verdict(row.image)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const InequalityCheck& c) {
  return {{"holds", c.holds()},
          {"comparisons", c.comparisons},
          {"failures", c.failures},
          {"first_failure", c.first_failure}};
}

json to_json(const ClosureReport& r) {
  return {{"precondition_met", r.precondition_met}, {"f", to_json(r.f)},
          {"g", to_json(r.g)},                       {"sum", to_json(r.sum)},
          {"composition", to_json(r.composition)},  {"sum_inequality", to_json(r.sum_inequality)}};
}

json to_json(const ChainReport& r) {
  json j;
  j["consistent"] = r.consistent;
  j["downward"] = to_json(r.downward);
  j["ward"] = to_json(r.ward);
  j["deviation"] = to_json(r.deviation);
  json rows = json::array();
  for (const auto& row : r.interleavings)
    rows.push_back({{"label", row.label},
                    {"construction", row.construction},
                    {"interleaved", to_string(row.interleaved.outcome)},
                    {"image", to_string(row.image.outcome)}});
  j["interleavings"] = std::move(rows);
  return j;
}

json to_json(const ImageCompactnessReport& r) {
  json j;
  j["skipped"] = r.skipped;
  j["reason"] = r.reason;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"label", row.label}, {"witness", to_json(row.witness)}, {"image", to_json(row.image)}});
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const UcCounterexample& c) {
  json j;
  j["eps0"] = c.eps0;
  j["pairs"] = c.alpha.size();
  j["selected"] = std::vector<std::uint64_t>(c.selected.indices().begin(), c.selected.indices().end());
  json pairs = json::array();
  for (std::size_t i = 0; i < c.alpha.size() && i < 16; ++i)
    pairs.push_back({{"n", i + 1}, {"alpha", c.alpha[i]}, {"beta", c.beta[i]}});
  j["first_pairs"] = std::move(pairs);
  j["input"] = to_json(c.input);
  j["image"] = to_json(c.image);
  return j;
}

json to_json(const UcImageReport& r) {
  json j;
  j["function"] = r.function;
  j["bound_checked"] = r.bound_checked;
  j["passed"] = r.passed();
  json rows = json::array();
  for (const auto& row : r.rows) {
    json bounds = json::array();
    for (const auto& b : row.bounds)
      bounds.push_back({{"epsilon", b.epsilon}, {"delta", number(b.delta)}, {"k0", b.k0},
                        {"check", to_json(b.check)}});
    rows.push_back({{"label", row.label},
                    {"input", to_string(row.input.outcome)},
                    {"image", row.image ? json(to_string(row.image->outcome)) : json(nullptr)},
                    {"bounds", std::move(bounds)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const UniformLimitReport& r) {
  json j;
  j["family"] = r.family;
  j["passed"] = r.passed();
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"epsilon", row.epsilon}, {"n", row.n}, {"error", number(row.error)},
                    {"inequality", to_json(row.inequality)}});
  j["rows"] = std::move(rows);
  j["member"] = to_json(r.member);
  j["limit"] = to_json(r.limit);
  return j;
}

json to_json(const SimulatedSequence& s) {
  json j = sequence_to_json(s.source);
  json se = json::array();
  for (const double v : s.standard_error) se.push_back(number(v));
  j["standard_error"] = std::move(se);
  j["exact"] = s.exact;
  return j;
}

}  // namespace rhostat
