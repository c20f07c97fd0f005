#include "rhostat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "rhostat/corpus.hpp"
#include "rhostat/error.hpp"

namespace rhostat {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

struct Recorder {
  CheckResult result;

  void expect(std::string name, bool ok, std::string detail = {}) {
    result.items.push_back({std::move(name), ok, std::move(detail)});
  }
};

const ClassTag kDownward = ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);

Corpus corpus_for(const VerifyConfig& cfg) {
  CorpusOptions options;
  options.horizon = cfg.horizon;
  options.seed = cfg.seed;
  options.sim_trials = cfg.sim_trials;
  return make_default_corpus(options);
}

// rho_n = n, one past the horizon so difference checkpoints reach it.
WeightSequence weights_for(std::uint64_t horizon) {
  return WeightSequence::statistical(horizon + 1);
}

std::vector<double> uniform_points(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> out(n);
  for (auto& x : out) x = u(rng);
  return out;
}

std::string outcome_detail(const Verdict& v) { return std::string(to_string(v.outcome)) + ": " + v.narrative; }

// --- density-oracle -------------------------------------------------------------

CheckResult check_density_oracle(const VerifyConfig& cfg) {
  Recorder r;
  constexpr std::uint64_t kN = 1000;
  CorpusOptions options;
  options.horizon = kN + 1;
  options.seed = cfg.seed;
  options.sim_trials = cfg.sim_trials;
  const Corpus corpus = make_default_corpus(options);
  const WeightSequence w = weights_for(kN + 1);
  const auto eps_grid = default_eps_grid();
  for (const auto& entry : corpus) {
    const SequenceSource& s = entry.source;
    const Prefix p = s.prefix(s.horizon());
    const double level = estimate_level(s);
    for (const auto pred : {Predicate::Downward, Predicate::Absolute, Predicate::Reversed,
                            Predicate::Deviation}) {
      const std::uint64_t n_max = std::min(kN, max_checkpoint(s, pred));
      std::vector<std::uint64_t> grid;
      for (std::uint64_t n = 2; n <= n_max; ++n) grid.push_back(n);
      const std::optional<double> lvl =
          pred == Predicate::Deviation ? std::optional<double>(level) : std::nullopt;
      const auto profiles = density_profiles(s, w, eps_grid, pred, lvl, grid);
      std::uint64_t mismatches = 0;
      std::string first;
      for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        const auto expect = brute_force_counts(p.values, pred, eps_grid[e], level, n_max);
        for (std::size_t c = 0; c < grid.size(); ++c) {
          if (profiles[e].checkpoints[c].count == expect[c]) continue;
          if (mismatches++ == 0)
            first = "eps=" + fmt(eps_grid[e]) + " n=" + std::to_string(grid[c]) + ": " +
                    std::to_string(profiles[e].checkpoints[c].count) + " vs " +
                    std::to_string(expect[c]);
        }
      }
      r.expect(s.label() + "/" + kernels::to_string(pred), mismatches == 0,
               mismatches == 0 ? std::to_string(grid.size() * eps_grid.size()) + " counts match"
                               : std::to_string(mismatches) + " mismatches, first " + first);
    }
  }
  r.result.summary = "kernel counts equal brute-force enumeration for n <= 1000";
  return r.result;
}

// --- compactness ------------------------------------------------------------------

CheckResult check_compactness(const VerifyConfig& cfg) {
  Recorder r;
  constexpr std::uint64_t kLength = 1000;
  const WeightSequence w = weights_for(kLength);

  const auto small = eval_prefix(construct_escaping_sequence(0.0, w, 4), 4);
  r.expect("escape-prefix", small == std::vector<double>{0, 2, 5, 9},
           "alpha_1..4 = " + fmt(small[0]) + "," + fmt(small[1]) + "," + fmt(small[2]) + "," +
               fmt(small[3]));

  const Witness esc = escaping_witness(0.0, w, kLength);
  const auto unit = std::find_if(esc.verification.evidence.begin(), esc.verification.evidence.end(),
                                 [](const DensityProfile& p) { return p.epsilon == 1.0; });
  const double d1 = unit == esc.verification.evidence.end() ? 0.0 : unit->final_density();
  r.expect("escape-rejects", esc.verification.outcome == Outcome::Reject && d1 >= 0.9,
           "d=" + fmt(d1) + " at eps=1, " + to_string(esc.verification.outcome));

  // Unbounded below: x_k = -k * U(0, 2).
  std::mt19937_64 rng(derive_seed(cfg.seed, 1, 0));
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> falling(4096);
  for (std::size_t k = 0; k < falling.size(); ++k) falling[k] = -static_cast<double>(k + 1) * u(rng);
  const SequenceSource fall = SequenceSource::table(falling, "falling");
  const WeightSequence wf = weights_for(falling.size());
  const Witness desc = extract_downward_witness(fall, wf);
  bool inequality = desc.method == ExtractionMethod::SteepDescent && desc.values.front() < 0.0;
  for (std::size_t k = 1; k < desc.values.size() && inequality; ++k)
    inequality = desc.values[k] < desc.values[k - 1] - wf.at(k + 1);
  r.expect("descent-inequality", inequality,
           std::to_string(desc.values.size()) + " terms via " + to_string(desc.method));
  r.expect("descent-verifies", desc.verification.outcome == Outcome::Accept,
           outcome_detail(desc.verification));

  const SequenceSource unif =
      SequenceSource::table(uniform_points(1000, 0.0, 1.0, derive_seed(cfg.seed, 2, 0)), "uniform");
  const Witness mono = extract_downward_witness(unif, weights_for(1000));
  r.expect("monotone-verifies",
           mono.method == ExtractionMethod::MonotoneBounded &&
               mono.verification.outcome == Outcome::Accept,
           std::to_string(mono.values.size()) + " terms, " + outcome_detail(mono.verification));
  r.result.summary = "escaping construction rejects; extracted witnesses verify";
  return r.result;
}

// --- class-parity ------------------------------------------------------------

CheckResult check_class_parity(const VerifyConfig& cfg) {
  Recorder r;
  constexpr std::size_t kSize = std::size_t{1} << 17;
  constexpr double kProbe = 1e3;
  struct Sample {
    std::string label;
    std::vector<double> points;
  };
  std::vector<Sample> samples;
  samples.push_back({"uniform[0,1]", uniform_points(kSize, 0.0, 1.0, derive_seed(cfg.seed, 3, 0))});
  samples.push_back({"-k", {}});
  samples.push_back({"k", {}});
  samples.push_back({"k*U(0,1)", uniform_points(kSize, 0.0, 1.0, derive_seed(cfg.seed, 3, 1))});
  for (std::size_t k = 0; k < kSize; ++k) {
    samples[1].points.push_back(-static_cast<double>(k + 1));
    samples[2].points.push_back(static_cast<double>(k + 1));
    samples[3].points[k] *= static_cast<double>(k + 1);
  }
  const WeightSequence w = weights_for(kSize);
  ExtractConfig ecfg;
  ecfg.bound_probe = kProbe;
  for (const auto& sample : samples) {
    SampleSet set{sample.points, sample.label, std::nullopt};
    const bool bounded = bounded_above_check(set, kProbe).bounded;
    const SequenceSource seq = SequenceSource::table(sample.points, sample.label);
    // The sequence each class is asked about: an extracted witness when one
    // exists, otherwise the escaping construction from the first point.
    std::optional<SequenceSource> subject;
    bool extracted = false;
    try {
      const Witness wit = extract_downward_witness(seq, w, ecfg);
      subject = SequenceSource::table(wit.values, wit.label);
      extracted = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoWitness) throw;
      subject = construct_escaping_sequence(sample.points.front(), weights_for(4096), 4096);
    }
    const ClassifyConfig vcfg = witness_config({}, subject->horizon());
    const WeightSequence ws = weights_for(subject->horizon());
    const Outcome stat = classify(*subject, ws, kDownward, vcfg).outcome;
    const Outcome lac =
        classify(*subject, ws, ClassTag::of(ClassKind::LacunaryStatDownwardQuasiCauchy), vcfg).outcome;
    const Outcome point = classify(*subject, ws, ClassTag::of(ClassKind::DownwardQuasiCauchy), vcfg).outcome;
    const auto agrees = [bounded](Outcome o) {
      return bounded ? o == Outcome::Accept : o == Outcome::Reject;
    };
    r.expect(sample.label, extracted == bounded && agrees(stat) && agrees(lac) && agrees(point),
             std::string("bounded=") + (bounded ? "yes" : "no") + " extracted=" +
                 (extracted ? "yes" : "no") + " statistical=" + to_string(stat) +
                 " lacunary=" + to_string(lac) + " pointwise=" + to_string(point));
  }
  r.result.summary = "bounded-above test, extraction and three downward classes agree per sample";
  return r.result;
}

// --- prop1 / prop2 ---------------------------------------------------------------

RealFunction random_pwl(std::mt19937_64& rng, std::size_t index) {
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  std::uniform_real_distribution<double> slope(0.0, 2.0);
  std::vector<std::pair<double, double>> knots;
  double y = xs(rng);
  std::vector<double> x(5);
  for (auto& v : x) v = xs(rng);
  std::sort(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) y += slope(rng) * (x[i] - x[i - 1]);
    knots.emplace_back(x[i], y);
  }
  return piecewise_linear(std::move(knots), "pwl#" + std::to_string(index));
}

RealFunction random_affine(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-2.0, 2.0);
  std::uniform_real_distribution<double> b(-5.0, 5.0);
  return affine(a(rng), b(rng));
}

CheckResult check_prop1(const VerifyConfig& cfg) {
  Recorder r;
  const Corpus corpus = corpus_for(cfg);
  const WeightSequence w = weights_for(cfg.horizon);
  std::mt19937_64 rng(derive_seed(cfg.seed, 4, 0));
  for (std::size_t i = 0; i < 20; ++i) {
    const RealFunction f = i % 2 == 0 ? random_affine(rng) : random_pwl(rng, i);
    const RealFunction g = i % 4 < 2 ? random_pwl(rng, i + 100) : random_affine(rng);
    const InequalityCheck c = sum_count_inequality(f, g, corpus, w);
    r.expect("pair " + std::to_string(i + 1) + " " + f.label + " + " + g.label, c.holds(),
             std::to_string(c.comparisons) + " comparisons" +
                 (c.holds() ? std::string() : ", first failure " + c.first_failure));
  }
  const ClosureReport id = closure_harness(identity_function(), identity_function(), corpus, w);
  r.expect("identity+identity",
           id.precondition_met && id.sum.summary == Preservation::Preserved &&
               id.sum_inequality.holds(),
           std::string("sum ") + to_string(id.sum.summary));
  const ClosureReport shifts = closure_harness(affine(1, 1), affine(1, 2), corpus, w);
  r.expect("(x+1)+(x+2)", shifts.precondition_met && shifts.sum.summary == Preservation::Preserved,
           std::string("sum ") + to_string(shifts.sum.summary));

  // Scaling by powers of two is exact in floating point, so the count
  // identity count_{cf}(eps) = count_f(eps / c) must hold to the integer.
  for (const double c : {2.0, 0.5}) {
    std::uint64_t mismatches = 0, compared = 0;
    const auto eps = default_eps_grid();
    std::vector<double> scaled_eps(eps);
    for (auto& e : scaled_eps) e /= c;
    for (const auto& entry : corpus) {
      const auto grid = resolve_grid(entry.source, w, Predicate::Downward, {});
      const auto a = density_profiles(apply(scale(c, identity_function()), entry.source), w, eps,
                                      Predicate::Downward, std::nullopt, grid);
      const auto b = density_profiles(entry.source, w, scaled_eps, Predicate::Downward,
                                      std::nullopt, grid);
      for (std::size_t e = 0; e < eps.size(); ++e)
        for (std::size_t k = 0; k < grid.size(); ++k, ++compared)
          mismatches += a[e].checkpoints[k].count != b[e].checkpoints[k].count;
    }
    r.expect("scaling c=" + fmt(c), mismatches == 0,
             std::to_string(compared) + " comparisons, " + std::to_string(mismatches) + " mismatches");
  }
  r.result.summary = "sum count inequality at every checkpoint and epsilon";
  return r.result;
}

CheckResult check_prop2(const VerifyConfig& cfg) {
  Recorder r;
  const Corpus corpus = corpus_for(cfg);
  const WeightSequence w = weights_for(cfg.horizon);
  const std::pair<RealFunction, RealFunction> pairs[] = {
      {affine(1, 1), affine(1, 2)},
      {parse_function("atan"), affine(1, -3)},
      {affine(0.5, 2), parse_function("tanh")},
  };
  for (const auto& [f, g] : pairs) {
    const ClosureReport c = closure_harness(f, g, corpus, w);
    r.expect("(" + g.label + ")o(" + f.label + ")",
             c.precondition_met && c.composition.summary == Preservation::Preserved,
             std::string("f ") + to_string(c.f.summary) + ", g " + to_string(c.g.summary) +
                 ", composition " + to_string(c.composition.summary));
  }
  r.result.summary = "compositions of preserving functions preserve";
  return r.result;
}

// --- chain / counterexample ---------------------------------------------------------

CheckResult check_chain(const VerifyConfig& cfg) {
  Recorder r;
  const Corpus corpus = corpus_for(cfg);
  const WeightSequence w = weights_for(cfg.horizon);
  std::size_t preserved = 0;
  for (const auto& f : chain_functions()) {
    const ChainReport c = chain_check(f, corpus, w);
    const bool down = c.downward.summary == Preservation::Preserved;
    preserved += down;
    std::size_t rejects = 0;
    for (const auto& row : c.interleavings)
      rejects += (row.interleaved.outcome == Outcome::Reject) + (row.image.outcome == Outcome::Reject);
    r.expect(f.label, down && c.consistent,
             std::string("downward ") + to_string(c.downward.summary) + ", ward " +
                 to_string(c.ward.summary) + ", deviation " + to_string(c.deviation.summary) +
                 ", " + std::to_string(c.interleavings.size()) + " interleavings, " +
                 std::to_string(rejects) + " rejects");
  }
  r.expect("ten-preserving", preserved >= 10, std::to_string(preserved) + " functions preserve");
  r.result.summary = "downward preservation carries to ward and deviation preservation";
  return r.result;
}

CheckResult check_counterexample(const VerifyConfig& cfg) {
  Recorder r;
  const Corpus corpus = corpus_for(cfg);
  const WeightSequence w = weights_for(cfg.horizon);
  const RealFunction neg = parse_function("neg");
  const auto ward = test_ward_continuity(neg, corpus, w);
  const auto down = test_downward_continuity(neg, corpus, w);
  r.expect("ward-preserved", ward.summary == Preservation::Preserved, to_string(ward.summary));
  r.expect("downward-violated", down.summary == Preservation::Violated && down.witness == "neg",
           std::string(to_string(down.summary)) + ", witness " + down.witness.value_or("none"));
  // The one-sided class really is one-sided: upward jumps of -alpha are
  // exactly the downward jumps of alpha.
  std::uint64_t mismatches = 0;
  for (const auto& entry : corpus) {
    const auto grid = resolve_grid(entry.source, w, Predicate::Downward, {});
    const auto eps = default_eps_grid();
    const auto a = density_profiles(apply(neg, entry.source), w, eps, Predicate::Downward,
                                    std::nullopt, grid);
    const auto b = density_profiles(entry.source, w, eps, Predicate::Reversed, std::nullopt, grid);
    for (std::size_t e = 0; e < eps.size(); ++e)
      for (std::size_t k = 0; k < grid.size(); ++k)
        mismatches += a[e].checkpoints[k].count != b[e].checkpoints[k].count;
  }
  r.expect("negation-asymmetry", mismatches == 0, std::to_string(mismatches) + " mismatches");
  r.result.summary = "-x preserves the ward class but not the downward class";
  return r.result;
}

// --- uc / uniform-limit ----------------------------------------------------------------

CheckResult check_uc(const VerifyConfig& cfg) {
  Recorder r;
  const WeightSequence w = weights_for(1 << 14);
  FalsifyConfig fcfg;
  fcfg.seed = cfg.seed;
  const auto square = falsify_uniform_continuity(parse_function("square"), {0.0, 1e6}, w, fcfg);
  r.expect("square-falsified",
           square && square->input.outcome == Outcome::Accept &&
               square->image.outcome == Outcome::Reject,
           square ? "eps0=" + fmt(square->eps0) + ", " + std::to_string(square->selected.size()) +
                        " selected pairs, input " + to_string(square->input.outcome) + ", image " +
                        to_string(square->image.outcome)
                  : std::string("none found"));
  for (const char* name : {"identity", "sin"}) {
    const auto none = falsify_uniform_continuity(parse_function(name), {-1e3, 1e3}, w, fcfg);
    r.expect(std::string(name) + "-survives", !none.has_value(),
             none ? "unexpected counterexample at eps0=" + fmt(none->eps0) : std::string("none found"));
  }
  // sqrt k needs about 2^20 terms before its eps = 0.01 density drops below
  // the default acceptance tolerance.
  constexpr std::uint64_t kRootHorizon = (std::uint64_t{1} << 20) + 1;
  const SequenceSource root =
      materialize(SequenceSource::closed_form("sqrt(k)", kRootHorizon, "sqrt"));
  const WeightSequence wr = weights_for(kRootHorizon);
  for (const char* name : {"scale:0.5", "abs", "const:3"}) {
    const UcImageReport rep = uc_image_check(parse_function(name), {root}, wr);
    std::string detail = rep.rows.empty() ? "no rows" : std::string("image ") +
        (rep.rows[0].image ? to_string(rep.rows[0].image->outcome) : "none");
    for (const auto& row : rep.rows)
      for (const auto& b : row.bounds)
        detail += ", eps=" + fmt(b.epsilon) + " k0=" + std::to_string(b.k0);
    r.expect(std::string(name) + "-image", rep.passed() && rep.bound_checked, detail);
  }
  r.result.summary = "x^2 is falsified, Lipschitz maps are not, and images obey the k0 bound";
  return r.result;
}

Corpus bounded_corpus(std::uint64_t horizon, double lo, double hi) {
  Corpus c;
  const auto add = [&](const char* expr, const char* label) {
    c.push_back({materialize(SequenceSource::closed_form(expr, horizon, label)), std::nullopt});
  };
  add("1/k", "1/k");
  add("1-1/k", "1-1/k");
  add("0.5", "half");
  add("0.5+0.5*sin(sqrt(k))", "sinroot");
  for (const auto& e : c) {
    const auto ext = kernels::extent(e.source.prefix(e.source.horizon()).values);
    if (ext.min < lo || ext.max > hi) fail(ErrorCode::InvalidConfig, "bounded corpus leaves its range");
  }
  return c;
}

CheckResult check_uniform_limit(const VerifyConfig& cfg) {
  Recorder r;
  const auto report = [&](const UniformLimitReport& u) {
    std::string detail;
    for (const auto& row : u.rows)
      detail += (detail.empty() ? "" : ", ") + std::string("eps=") + fmt(row.epsilon) + " N=" +
                std::to_string(row.n) + (row.inequality.holds() ? "" : " FAIL");
    detail += std::string("; limit ") + to_string(u.limit.summary);
    r.expect(u.family, u.passed() && u.limit.summary == Preservation::Preserved, detail);
  };
  report(uniform_limit_check(shift_family(), corpus_for(cfg), weights_for(cfg.horizon)));
  constexpr std::uint64_t kBounded = 4097;
  const Corpus unit = bounded_corpus(kBounded, 0.0, 1.0);
  const WeightSequence wb = weights_for(kBounded);
  RealFunction sine = parse_function("sin");
  report(uniform_limit_check(bernstein_family(sine, 1.0), unit, wb));
  report(uniform_limit_check(clipped_square_family(3.0), unit, wb));
  r.result.summary = "uniform limits of preserving families preserve";
  return r.result;
}

// --- simulators ---------------------------------------------------------------------

CheckResult check_simulators(const VerifyConfig& cfg) {
  Recorder r;
  const auto exact = pairing_exact_values(kPairingEnumerationLimit);
  r.expect("pairing-exact-small", exact[1] == 1.0 && exact[2] == 0.0,
           "alpha_1=" + fmt(exact[1]) + " alpha_2=" + fmt(exact[2]));
  double worst = 0.0;
  for (std::uint64_t n = 3; n <= kPairingEnumerationLimit; ++n) {
    const Estimate e = pairing_monte_carlo(n, exact, cfg.sim_trials, cfg.seed);
    worst = std::max(worst, std::fabs(e.mean - exact[n]) / std::max(e.standard_error, 1e-300));
  }
  r.expect("pairing-mc-vs-exact", worst <= 4.0, "max |z| = " + fmt(worst));

  const auto expect = ternary_exact_expectations(kTernaryExactLimit);
  bool monotone = true;
  for (std::size_t k = 0; k < expect.size(); ++k) {
    if (expect[k] < 0.0) monotone = false;
    if (k > 0 && expect[k] < expect[k - 1]) monotone = false;
  }
  r.expect("ternary-dp-monotone", monotone, "E[T_64] = " + fmt(expect.back()));
  double worst_t = 0.0;
  for (const std::uint64_t k : {5, 8, 12}) {
    const Estimate e = ternary_monte_carlo(k, cfg.sim_trials, cfg.seed, 4);
    worst_t = std::max(worst_t, std::fabs(e.mean - expect[k]) / std::max(e.standard_error, 1e-300));
  }
  r.expect("ternary-mc-vs-exact", worst_t <= 4.0, "max |z| = " + fmt(worst_t));

  CorpusOptions options;
  options.seed = cfg.seed;
  options.sim_trials = cfg.sim_trials;
  Tolerances widened;
  widened.accept = options.sim_tau_accept;
  ClassifyConfig ccfg;
  ccfg.tolerances = widened;
  for (const char* name : {"pairing", "ternary"}) {
    const SequenceSource s = builtin_sequence(name, options.sim_max_n, cfg.seed);
    const Verdict v = classify(s, weights_for(s.horizon()), kDownward, ccfg);
    r.expect(std::string(name) + "-not-reject", v.outcome != Outcome::Reject, outcome_detail(v));
  }
  r.result.summary = "simulators agree with exact values and classify not-Reject";
  return r.result;
}

// --- image-compactness ------------------------------------------------------------------

CheckResult check_image_compactness(const VerifyConfig& cfg) {
  Recorder r;
  const Corpus corpus = corpus_for(cfg);
  const WeightSequence w = weights_for(cfg.horizon);
  std::vector<SequenceSource> samples;
  for (std::uint64_t i = 0; i < 3; ++i)
    samples.push_back(SequenceSource::table(uniform_points(1000, 0.0, 1.0, derive_seed(cfg.seed, 5, i)),
                                            "uniform#" + std::to_string(i + 1)));
  const WeightSequence ws = weights_for(1000);
  const auto run = [&](const char* name, bool want_accept) {
    const RealFunction f = parse_function(name);
    // Preservation is judged on the corpus, extraction on the samples.
    const auto pre = test_downward_continuity(f, corpus, w);
    ImageCompactnessReport rep;
    if (pre.summary == Preservation::Preserved) {
      rep = image_compactness_check(f, samples, Corpus{}, ws);
    } else {
      rep.skipped = true;
    }
    bool ok = !rep.skipped && !rep.rows.empty();
    std::string detail;
    for (const auto& row : rep.rows) {
      ok = ok && (want_accept ? row.image.outcome == Outcome::Accept
                              : row.image.outcome != Outcome::Reject);
      detail += (detail.empty() ? "" : ", ") + row.label + " " + to_string(row.image.outcome);
    }
    r.expect(name, ok, rep.skipped ? "skipped" : detail);
  };
  run("affine:1,1", true);
  run("atan", false);
  const auto neg = image_compactness_check(parse_function("neg"), samples, corpus, w);
  r.expect("neg-skipped", neg.skipped, neg.reason);
  r.result.summary = "images of extracted witnesses stay downward quasi-Cauchy";
  return r.result;
}

// --- implications ---------------------------------------------------------------------

CheckResult check_implications(const VerifyConfig& cfg) {
  Recorder r;
  const Corpus corpus = corpus_for(cfg);
  const WeightSequence w = weights_for(cfg.horizon);
  for (const auto& entry : corpus) {
    ClassifyConfig ccfg;
    if (entry.tolerances) ccfg.tolerances = *entry.tolerances;
    const ImplicationReport rep = implication_report(entry.source, w, ccfg);
    r.expect(entry.source.label(), rep.anomalies.empty(),
             rep.anomalies.empty() ? std::to_string(rep.rows.size()) + " classes"
                                   : rep.anomalies.front().detail);
  }
  r.result.summary = "no implication has an accepted upstream and a rejected downstream";
  return r.result;
}

using CheckFn = CheckResult (*)(const VerifyConfig&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"density-oracle", check_density_oracle},
      {"compactness", check_compactness},
      {"class-parity", check_class_parity},
      {"prop1", check_prop1},
      {"prop2", check_prop2},
      {"chain", check_chain},
      {"counterexample", check_counterexample},
      {"uc", check_uc},
      {"uniform-limit", check_uniform_limit},
      {"simulators", check_simulators},
      {"image-compactness", check_image_compactness},
      {"implications", check_implications},
  };
  return checks;
}

}  // namespace

bool CheckResult::passed() const noexcept {
  return !items.empty() &&
         std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

CheckResult run_check(std::string_view name, const VerifyConfig& cfg) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    CheckResult r;
    try {
      r = fn(cfg);
    } catch (const Error& e) {
      r.items.push_back({"error", false, std::string(to_string(e.code())) + ": " + e.what()});
    }
    r.name = n;
    return r;
  }
  fail(ErrorCode::UnknownName, "unknown check '" + std::string(name) + "'");
}

std::vector<CheckResult> verify_theorems(const std::vector<std::string>& filter,
                                         const VerifyConfig& cfg) {
  const auto& names = check_names();
  for (const auto& f : filter)
    if (std::find(names.begin(), names.end(), f) == names.end())
      fail(ErrorCode::UnknownName, "unknown check '" + f + "'");
  std::vector<CheckResult> out;
  for (const auto& name : names)
    if (filter.empty() || std::find(filter.begin(), filter.end(), name) != filter.end())
      out.push_back(run_check(name, cfg));
  return out;
}

json to_json(const CheckResult& r) {
  json j;
  j["name"] = r.name;
  j["passed"] = r.passed();
  j["summary"] = r.summary;
  json items = json::array();
  for (const auto& i : r.items) items.push_back({{"name", i.name}, {"passed", i.passed}, {"detail", i.detail}});
  j["items"] = std::move(items);
  return j;
}

std::vector<RealFunction> chain_functions() {
  return {identity_function(),        affine(1, 1),
          affine(1, -3.5),            affine(0.5, 2),
          affine(2, 3),               scale(0.25, identity_function()),
          parse_function("atan"),     parse_function("tanh"),
          parse_function("softsign"), parse_function("clamp:-1,1"),
          constant_function(4)};
}

std::vector<std::uint64_t> brute_force_counts(std::span<const double> values, Predicate predicate,
                                              double eps, double level, std::uint64_t n_max) {
  const auto hit = [&](std::size_t k) {  // 1-based k
    const double a = values[k - 1];
    switch (predicate) {
      case Predicate::Downward: return values[k] - a >= eps;
      case Predicate::Absolute: return std::fabs(values[k] - a) >= eps;
      case Predicate::Reversed: return values[k] - a <= -eps;
      case Predicate::Deviation: return std::fabs(a - level) >= eps;
    }
    return false;
  };
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= n; ++k) c += hit(k);
    out.push_back(c);
  }
  return out;
}

}  // namespace rhostat
