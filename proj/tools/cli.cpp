#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rhostat/corpus.hpp"
#include "rhostat/error.hpp"
#include "rhostat/io.hpp"
#include "rhostat/verify.hpp"

namespace rhostat::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string rho;
  std::uint64_t n_max = 100000;
  std::vector<double> eps_grid;
  double tol_accept = 0.01;
  double tol_reject = 0.1;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
};

struct Context {
  CLI::App* root = nullptr;
  CLI::App* command = nullptr;  // innermost selected subcommand
  Globals g;
  std::ostream* out = nullptr;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string command_path(const CLI::App* app) {
  std::string path;
  for (const CLI::App* a = app; a != nullptr && a->get_parent() != nullptr; a = a->get_parent())
    path = a->get_name() + (path.empty() ? "" : " " + path);
  return path;
}

void add_params(json& params, const CLI::App* app) {
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--version") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      std::string joined;
      for (const auto& r : results) joined += (joined.empty() ? "" : ",") + r;
      params[name] = joined;
    } else {
      const std::string def = opt->get_default_str();
      params[name] = def == "{}" ? std::string() : def;
    }
  }
}

// Command, every parameter (given or defaulted), seed, version, timestamp.
json manifest(const Context& ctx) {
  json params = json::object();
  add_params(params, ctx.root);
  std::vector<const CLI::App*> chain;
  for (const CLI::App* a = ctx.command; a != nullptr && a != ctx.root; a = a->get_parent())
    chain.insert(chain.begin(), a);
  for (const CLI::App* a : chain) add_params(params, a);
  params["--format"] = ctx.g.format;  // report switches its default to csv
  json m;
  m["command"] = command_path(ctx.command);
  m["params"] = std::move(params);
  m["seed"] = ctx.g.seed;
  m["version"] = kVersion;
  m["timestamp"] = utc_timestamp();
  return m;
}

void write_text(const Context& ctx, const std::string& path, const std::string& text) {
  if (path.empty()) {
    *ctx.out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  f << text;
  if (!f) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

json with_manifest(const Context& ctx, const json& payload) {
  json doc;
  doc["manifest"] = manifest(ctx);
  if (payload.is_object()) {
    for (const auto& [key, value] : payload.items()) doc[key] = value;
  } else {
    doc["results"] = payload;
  }
  return doc;
}

void emit_json(const Context& ctx, const json& payload, const std::string& path) {
  write_text(ctx, path, with_manifest(ctx, payload).dump(2) + "\n");
}

void emit_json(const Context& ctx, const json& payload) { emit_json(ctx, payload, ctx.g.out); }

void emit_csv(const Context& ctx, const std::string& body) {
  write_text(ctx, ctx.g.out, "# manifest " + manifest(ctx).dump() + "\n" + body);
}

bool csv(const Context& ctx) { return ctx.g.format == "csv"; }

void json_only(const Context& ctx) {
  if (csv(ctx))
    throw UsageError("--format csv is not available for '" + command_path(ctx.command) + "'");
}

std::string profiles_csv(const std::vector<DensityProfile>& profiles) {
  std::ostringstream s;
  write_profiles_csv(s, profiles);
  return s.str();
}

int exit_for(Outcome o) { return o == Outcome::Inconclusive ? 2 : 0; }

const std::string& require_rho(const Context& ctx) {
  if (ctx.g.rho.empty())
    throw UsageError("'" + command_path(ctx.command) + "' needs --rho (e.g. --rho statistical)");
  return ctx.g.rho;
}

// Sequences and weights reach one past n_max so difference predicates have
// alpha_{n+1} at the last checkpoint.
std::uint64_t horizon(const Context& ctx) { return ctx.g.n_max + 1; }

WeightSequence weights(const Context& ctx, std::uint64_t h) { return make_weights(require_rho(ctx), h); }

ClassifyConfig classify_config(const Context& ctx) {
  ClassifyConfig cfg;
  cfg.tolerances = {ctx.g.tol_accept, ctx.g.tol_reject};
  if (!ctx.g.eps_grid.empty()) cfg.eps_grid = ctx.g.eps_grid;
  cfg.n_max = ctx.g.n_max;
  return cfg;
}

Corpus corpus(const Context& ctx, const std::string& corpus_file) {
  if (corpus_file.empty()) {
    CorpusOptions options;
    options.horizon = horizon(ctx);
    options.seed = ctx.g.seed;
    return make_default_corpus(options);
  }
  Corpus out;
  for (const auto& e : read_corpus_file(corpus_file))
    out.push_back({parse_sequence_spec(e.source, horizon(ctx), ctx.g.seed).relabeled(e.label), std::nullopt});
  return out;
}

Predicate parse_predicate(const std::string& name) {
  for (auto p : {Predicate::Downward, Predicate::Absolute, Predicate::Deviation, Predicate::Reversed})
    if (name == kernels::to_string(p)) return p;
  throw UsageError("unknown predicate '" + name + "' (downward, absolute, deviation, reversed)");
}

// --- commands ------------------------------------------------------------------

struct ClassifyArgs {
  std::string seq;
  std::string batch;
  std::string cls;
  std::optional<double> level;
  std::vector<std::uint64_t> theta;
};

ClassTag make_tag(const ClassifyArgs& a) {
  const ClassKind kind = parse_class_kind(a.cls);
  ClassTag tag = ClassTag::of(kind);
  tag.level = a.level;
  if (!a.theta.empty()) tag.theta = a.theta;
  return tag;
}

int cmd_classify(const Context& ctx, const ClassifyArgs& a) {
  if (a.seq.empty() == a.batch.empty()) throw UsageError("classify needs exactly one of --seq and --batch");
  const WeightSequence w = weights(ctx, horizon(ctx));
  const ClassifyConfig cfg = classify_config(ctx);
  if (a.cls == "implications") {
    json_only(ctx);
    if (a.seq.empty()) throw UsageError("the implication report takes --seq");
    const SequenceSource s = parse_sequence_spec(a.seq, horizon(ctx), ctx.g.seed);
    emit_json(ctx, to_json(implication_report(s, w, cfg)));
    return 0;
  }
  const ClassTag tag = make_tag(a);
  if (!a.batch.empty()) {
    json rows = json::array();
    std::vector<DensityProfile> all;
    int code = 0;
    for (const auto& e : read_corpus_file(a.batch)) {
      const SequenceSource s = parse_sequence_spec(e.source, horizon(ctx), ctx.g.seed).relabeled(e.label);
      const Verdict v = classify(s, w, tag, cfg);
      if (v.outcome == Outcome::Inconclusive) code = 2;
      rows.push_back({{"label", e.label}, {"source", e.source}, {"class", tag.describe()}, {"verdict", to_json(v)}});
      all.insert(all.end(), v.evidence.begin(), v.evidence.end());
    }
    if (csv(ctx)) emit_csv(ctx, profiles_csv(all));
    else emit_json(ctx, rows);
    return code;
  }
  const SequenceSource s = parse_sequence_spec(a.seq, horizon(ctx), ctx.g.seed);
  const Verdict v = classify(s, w, tag, cfg);
  if (csv(ctx)) emit_csv(ctx, profiles_csv(v.evidence));
  else emit_json(ctx, json{{"label", s.label()}, {"class", tag.describe()}, {"verdict", to_json(v)}});
  return exit_for(v.outcome);
}

int cmd_sweep(const Context& ctx, const std::string& seq, const std::string& predicate,
              std::optional<double> level) {
  const SequenceSource s = parse_sequence_spec(seq, horizon(ctx), ctx.g.seed);
  const WeightSequence w = weights(ctx, horizon(ctx));
  const ClassifyConfig cfg = classify_config(ctx);
  const Predicate pred = parse_predicate(predicate);
  const auto grid = resolve_grid(s, w, pred, cfg);
  const Verdict v = eps_sweep(s, w, pred, level, cfg.eps_grid, grid, cfg.tolerances);
  if (csv(ctx)) emit_csv(ctx, profiles_csv(v.evidence));
  else emit_json(ctx, json{{"label", s.label()}, {"predicate", predicate}, {"verdict", to_json(v)}});
  return exit_for(v.outcome);
}

int cmd_extract(const Context& ctx, const std::string& seq, double probe) {
  const SequenceSource s = parse_sequence_spec(seq, horizon(ctx), ctx.g.seed);
  const WeightSequence w = weights(ctx, std::max<std::uint64_t>(s.horizon(), 2));
  ExtractConfig cfg;
  cfg.classify = classify_config(ctx);
  cfg.classify.n_max = 0;
  cfg.bound_probe = probe;
  const Witness wit = extract_downward_witness(s, w, cfg);
  if (csv(ctx)) emit_csv(ctx, profiles_csv(wit.verification.evidence));
  else emit_json(ctx, json{{"source", s.label()}, {"witness", to_json(wit)}});
  return exit_for(wit.verification.outcome);
}

int cmd_escape(const Context& ctx, double start, std::uint64_t length) {
  const WeightSequence w = weights(ctx, length);
  ClassifyConfig cfg = classify_config(ctx);
  cfg.n_max = 0;
  const Witness wit = escaping_witness(start, w, length, cfg);
  if (csv(ctx)) {
    std::ostringstream s;
    write_sequence_csv(s, SequenceSource::table(wit.values, wit.label));
    emit_csv(ctx, s.str());
  } else {
    emit_json(ctx, json{{"witness", to_json(wit)}});
  }
  return exit_for(wit.verification.outcome);
}

struct FunctionArgs {
  std::string fn;
  std::string g;
  std::string property = "downward";
  std::string corpus_file;
};

int cmd_test_function(const Context& ctx, const FunctionArgs& a) {
  json_only(ctx);
  const RealFunction f = parse_function(a.fn);
  const Corpus c = corpus(ctx, a.corpus_file);
  const WeightSequence w = weights(ctx, horizon(ctx));
  const ClassifyConfig cfg = classify_config(ctx);
  json payload;
  if (a.property == "downward") payload = to_json(test_downward_continuity(f, c, w, cfg));
  else if (a.property == "ward") payload = to_json(test_ward_continuity(f, c, w, cfg));
  else if (a.property == "deviation") payload = to_json(test_preservation(f, Property::Deviation, c, w, cfg));
  else if (a.property == "chain") payload = to_json(chain_check(f, c, w, cfg));
  else if (a.property == "closure") {
    if (a.g.empty()) throw UsageError("--property closure needs --g");
    payload = to_json(closure_harness(f, parse_function(a.g), c, w, cfg));
  } else {
    throw UsageError("unknown property '" + a.property + "' (downward, ward, deviation, chain, closure)");
  }
  emit_json(ctx, payload);
  return 0;
}

struct FalsifyArgs {
  std::string fn;
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t pairs = 4096;
  std::uint64_t draws = 1000;
};

int cmd_falsify(const Context& ctx, const FalsifyArgs& a) {
  json_only(ctx);
  const RealFunction f = parse_function(a.fn);
  FalsifyConfig cfg;
  cfg.pairs = a.pairs;
  cfg.draws_per_n = a.draws;
  cfg.seed = ctx.g.seed;
  cfg.classify = classify_config(ctx);
  const WeightSequence w = weights(ctx, 2 * a.pairs);
  const auto cx = falsify_uniform_continuity(f, {a.lo, a.hi}, w, cfg);
  json payload;
  payload["function"] = f.label;
  payload["domain"] = {a.lo, a.hi};
  payload["found"] = cx.has_value();
  payload["counterexample"] = cx ? to_json(*cx) : json(nullptr);
  emit_json(ctx, payload);
  return 0;
}

int cmd_simulate(const Context& ctx, const std::string& process, const SimConfig& cfg) {
  const SimulatedSequence sim =
      process == "pairing" ? pairing_survivor_sequence(cfg) : ternary_split_sequence(cfg);
  if (csv(ctx)) {
    std::ostringstream s;
    write_sequence_csv(s, sim.source);
    emit_csv(ctx, s.str());
  } else if (ctx.g.out.empty()) {
    emit_json(ctx, to_json(sim));
  } else {
    emit_json(ctx, sequence_to_json(sim.source));
  }
  if (!ctx.g.out.empty()) {
    // Standard errors go to a sidecar next to the sequence file.
    json se;
    se["label"] = sim.source.label();
    json all = to_json(sim);
    se["standard_error"] = all["standard_error"];
    se["exact"] = all["exact"];
    emit_json(ctx, se, ctx.g.out + ".se.json");
  }
  return 0;
}

int cmd_verify(const Context& ctx, const std::vector<std::string>& filter, const VerifyConfig& cfg) {
  json_only(ctx);
  const auto results = verify_theorems(filter, cfg);
  bool passed = true;
  json checks = json::array();
  for (const auto& r : results) {
    passed = passed && r.passed();
    checks.push_back(to_json(r));
  }
  emit_json(ctx, json{{"passed", passed}, {"checks", checks}});
  return passed ? 0 : 1;
}

int cmd_report(const Context& ctx, const std::string& in) {
  const auto profiles = profiles_in(read_json_file(in));
  if (profiles.empty()) fail(ErrorCode::ParseError, in + ": no density profiles found");
  if (ctx.g.format == "json") {
    json arr = json::array();
    for (const auto& p : profiles) arr.push_back(to_json(p));
    emit_json(ctx, json{{"profiles", arr}});
  } else {
    emit_csv(ctx, profiles_csv(profiles));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted statistical density analysis of real sequences", "rhostat"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Context ctx;
  ctx.root = &app;
  ctx.out = &out;
  Globals& g = ctx.g;
  app.add_option("--rho", g.rho, "weight spec: statistical, expr:<f(n)>[;i=v...], table:<path>");
  app.add_option("--n-max", g.n_max, "largest checkpoint n")->check(CLI::PositiveNumber);
  app.add_option("--eps-grid", g.eps_grid, "descending epsilons, comma separated")->delimiter(',');
  app.add_option("--tol-accept", g.tol_accept, "tau_accept");
  app.add_option("--tol-reject", g.tol_reject, "tau_reject");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "output file (default stdout)");

  std::function<int()> action;

  auto* weights_cmd = app.add_subcommand("weights", "weight sequence tools")->require_subcommand(1);
  ConditionBounds bounds;
  auto* wcheck = weights_cmd->add_subcommand("check", "check the weight conditions over 1..n-max");
  wcheck->add_option("--ratio-bound", bounds.ratio_bound, "B in rho_n <= B n");
  wcheck->add_option("--increment-bound", bounds.increment_bound, "C in rho_{n+1} - rho_n <= C");
  wcheck->callback([&] {
    action = [&] {
      json_only(ctx);
      const WeightSequence w = weights(ctx, g.n_max + 1);
      emit_json(ctx, json{{"weights", w.description()}, {"report", to_json(check_conditions(w, g.n_max, bounds))}});
      return 0;
    };
  });

  ClassifyArgs ca;
  auto* cls = app.add_subcommand("classify", "classify a sequence");
  cls->add_option("--seq", ca.seq, "sequence spec: expr:, table:, csv:, json:, builtin:");
  cls->add_option("--batch", ca.batch, "JSON corpus file [{label, source}]");
  cls->add_option("--class", ca.cls,
                  "qc, downward-qc, rho-qc, rho-downward, rho-convergent, half-cauchy, "
                  "lacunary-downward, or implications")
      ->required();
  cls->add_option("--level", ca.level, "limit for rho-convergent");
  cls->add_option("--theta", ca.theta, "lacunary k_0=0,k_1,... comma separated")->delimiter(',');
  cls->callback([&] { action = [&] { return cmd_classify(ctx, ca); }; });

  std::string sseq, spred = "downward";
  std::optional<double> slevel;
  auto* sweep = app.add_subcommand("sweep", "density profiles and verdict over the epsilon grid");
  sweep->add_option("--seq", sseq, "sequence spec")->required();
  sweep->add_option("--predicate", spred, "downward, absolute, deviation, reversed");
  sweep->add_option("--level", slevel, "level for the deviation predicate");
  sweep->callback([&] { action = [&] { return cmd_sweep(ctx, sseq, spred, slevel); }; });

  std::string eseq;
  double probe = std::numeric_limits<double>::infinity();
  auto* extract = app.add_subcommand("extract-witness", "extract a downward quasi-Cauchy subsequence");
  extract->add_option("--seq", eseq, "sequence spec")->required();
  extract->add_option("--probe", probe, "monotone extraction only when the sample max is at most this");
  extract->callback([&] { action = [&] { return cmd_extract(ctx, eseq, probe); }; });

  double start = 0.0;
  std::uint64_t length = 1000;
  auto* escape = app.add_subcommand("construct-escape", "build the escaping sequence");
  escape->add_option("--start", start, "alpha_1");
  escape->add_option("--length", length, "number of terms")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 26));
  escape->callback([&] { action = [&] { return cmd_escape(ctx, start, length); }; });

  FunctionArgs fa;
  auto* tf = app.add_subcommand("test-function", "preservation tests of f over a corpus");
  tf->add_option("--fn", fa.fn, "function spec, e.g. neg, affine:2,3, lipschitz-pwl:<path>")->required();
  tf->add_option("--g", fa.g, "second function for --property closure");
  tf->add_option("--property", fa.property, "downward, ward, deviation, chain, closure");
  tf->add_option("--corpus", fa.corpus_file, "JSON corpus file (default: built-in corpus)");
  tf->callback([&] { action = [&] { return cmd_test_function(ctx, fa); }; });

  FalsifyArgs xa;
  auto* fu = app.add_subcommand("falsify-uc", "search for a uniform-continuity counterexample");
  fu->add_option("--fn", xa.fn, "function spec")->required();
  fu->add_option("--lo", xa.lo, "domain lower end");
  fu->add_option("--hi", xa.hi, "domain upper end");
  fu->add_option("--pairs", xa.pairs, "pairs n = 1..pairs");
  fu->add_option("--draws", xa.draws, "random draws per n");
  fu->callback([&] { action = [&] { return cmd_falsify(ctx, xa); }; });

  auto* sim = app.add_subcommand("simulate", "simulated example sequences")->require_subcommand(1);
  SimConfig pcfg, tcfg;
  for (auto [name, c] : {std::pair{"pairing", &pcfg}, std::pair{"ternary", &tcfg}}) {
    auto* sub = sim->add_subcommand(name, std::string(name) + " process");
    sub->add_option("--max-n", c->max_n, "largest group size");
    sub->add_option("--trials", c->trials, "Monte Carlo trials per term");
    sub->add_option("--exact-cutoff", c->exact_cutoff, "exact computation up to this size");
    const std::string process = name;
    sub->callback([&, c, process] {
      action = [&, c, process] {
        c->seed = g.seed;
        return cmd_simulate(ctx, process, *c);
      };
    });
  }

  std::vector<std::string> filter;
  VerifyConfig vcfg;
  auto* vt = app.add_subcommand("verify-theorems", "run the theorem checks");
  vt->add_option("--filter", filter, "check names, comma separated")->delimiter(',');
  vt->add_option("--horizon", vcfg.horizon, "corpus horizon");
  vt->add_option("--trials", vcfg.sim_trials, "simulation trials");
  vt->callback([&] {
    action = [&] {
      vcfg.seed = g.seed;
      return cmd_verify(ctx, filter, vcfg);
    };
  });

  std::string report_in;
  auto* rep = app.add_subcommand("report", "plot-ready (eps, n, density) table from a profile JSON");
  rep->add_option("--in", report_in, "JSON file holding density profiles")->required();
  rep->callback([&] {
    action = [&] {
      // Tables are the point of this command; JSON only on request.
      if (app.get_option("--format")->count() == 0) g.format = "csv";
      return cmd_report(ctx, report_in);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  for (CLI::App* a = &app; a != nullptr;) {
    ctx.command = a;
    const auto subs = a->get_subcommands();
    a = subs.empty() ? nullptr : subs.front();
  }

  try {
    return action ? action() : 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rhostat::cli
