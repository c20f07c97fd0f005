// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rhostat/compactness.hpp"
#include "rhostat/corpus.hpp"
#include "rhostat/density.hpp"
#include "rhostat/error.hpp"
#include "rhostat/funcanalysis.hpp"
#include "rhostat/simulate.hpp"
#include "rhostat/verify.hpp"

using namespace rhostat;

namespace {

// Pinned tolerances and budgets.
constexpr double kOracleSeconds = 5.0;
constexpr std::uint64_t kClassifyHorizon = 100000;
constexpr double kAltDensity = 0.5;
constexpr double kAltTolerance = 0.01;
constexpr double kSqrtDensityCap = 0.01;
constexpr std::uint64_t kEscapeLength = 1000;
constexpr double kEscapeDensityFloor = 0.9;
constexpr std::uint64_t kUniformSamples = 1000;
constexpr int kClosurePairs = 20;
constexpr int kChainFunctions = 10;
constexpr double kFalsifySeconds = 10.0;
constexpr double kStandardErrors = 4.0;
constexpr std::uint64_t kSimTrials = 10000;
constexpr double kSimTauAccept = 0.05;
constexpr double kSimSeconds = 60.0;

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

std::uint64_t reference_count(const std::vector<double>& v, Predicate p, double eps, double level,
                              std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (p == Predicate::Deviation) {
      c += std::fabs(v[k] - level) >= eps ? 1 : 0;
      continue;
    }
    const double d = v[k + 1] - v[k];
    if (p == Predicate::Downward && d >= eps) ++c;
    if (p == Predicate::Absolute && std::fabs(d) >= eps) ++c;
    if (p == Predicate::Reversed && d <= -eps) ++c;
  }
  return c;
}

Line density_oracle() {
  Line l;
  const auto t0 = std::chrono::steady_clock::now();
  CorpusOptions o;
  o.horizon = 1001;
  const Corpus corpus = make_default_corpus(o);
  const auto w = WeightSequence::statistical(1001);
  std::uint64_t compared = 0;
  for (const auto& e : corpus) {
    const auto v = eval_prefix(e.source, e.source.horizon());
    const double level = estimate_level(e.source);
    for (Predicate p : {Predicate::Downward, Predicate::Absolute, Predicate::Reversed,
                        Predicate::Deviation}) {
      const std::uint64_t top = std::min<std::uint64_t>(1000, max_checkpoint(e.source, p));
      std::vector<std::uint64_t> grid;
      for (std::uint64_t n = 2; n <= top; ++n) grid.push_back(n);
      const auto lvl = p == Predicate::Deviation ? std::optional<double>(level) : std::nullopt;
      const auto profiles = density_profiles(e.source, w, default_eps_grid(), p, lvl, grid);
      for (const auto& prof : profiles)
        for (const auto& c : prof.checkpoints) {
          ++compared;
          l.require(c.count == reference_count(v, p, prof.epsilon, level, c.n),
                    e.source.label() + " " + kernels::to_string(p) + " eps=" + num(prof.epsilon) +
                        " n=" + std::to_string(c.n));
        }
    }
  }
  const double secs = seconds_since(t0);
  l.require(secs < kOracleSeconds, "took " + num(secs) + " s");
  if (l.pass) l.detail = std::to_string(compared) + " counts equal, " + num(secs) + " s";
  return l;
}

Line classifier_ground_truth() {
  Line l;
  const std::uint64_t h = kClassifyHorizon + 1;
  const auto w = WeightSequence::statistical(h);
  ClassifyConfig cfg;
  cfg.n_max = kClassifyHorizon;
  const auto down = ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);
  auto run = [&](const char* expr, const ClassTag& tag) {
    return classify(SequenceSource::closed_form(expr, h), w, tag, cfg);
  };
  l.require(run("-k", down).outcome == Outcome::Accept, "-k downward not Accept");
  l.require(run("-k", ClassTag::of(ClassKind::RhoStatQuasiCauchy)).outcome == Outcome::Reject,
            "-k rho-qc not Reject");
  l.require(run("k", down).outcome == Outcome::Reject, "k not Reject");
  const auto alt = run("(-1)^k", down);
  l.require(alt.outcome == Outcome::Reject, "(-1)^k not Reject");
  for (const auto& p : alt.evidence)
    if (p.epsilon == 1.0)
      l.require(std::fabs(p.final_density() - kAltDensity) <= kAltTolerance,
                "(-1)^k eps=1 density " + num(p.final_density()));
  const auto sq = run("sqrt(k)", down);
  for (const auto& p : sq.evidence)
    l.require(p.final_density() <= kSqrtDensityCap,
              "sqrt k eps=" + num(p.epsilon) + " final density " + num(p.final_density()) +
                  " > " + num(kSqrtDensityCap) + " at n=" + std::to_string(p.checkpoints.back().n));
  l.require(sq.outcome == Outcome::Accept,
            std::string("sqrt k verdict ") + to_string(sq.outcome));
  if (l.pass) l.detail = "all verdicts and densities as expected";
  return l;
}

Line compactness_suite() {
  Line l;
  const auto w = WeightSequence::statistical(1 << 16);
  const auto esc = escaping_witness(0.0, w, kEscapeLength);
  l.require(esc.verification.outcome == Outcome::Reject, "escaping sequence not Reject");
  for (const auto& p : esc.verification.evidence)
    if (p.epsilon == 1.0)
      l.require(p.final_density() >= kEscapeDensityFloor, "escape d=" + num(p.final_density()));

  const std::uint64_t n = 4096;
  const auto steep = SequenceSource::closed_form("-k^2/10 + 5*sin(k)", n, "unbounded-below");
  const auto wit = extract_downward_witness(steep, w);
  l.require(wit.method == ExtractionMethod::SteepDescent, "steep descent not used");
  l.require(!wit.values.empty() && wit.values[0] < 0, "first witness term not negative");
  for (std::size_t k = 1; k < wit.values.size(); ++k)
    l.require(wit.values[k] < wit.values[k - 1] - w.at(k + 1),
              "descent inequality fails at k=" + std::to_string(k + 1));
  l.require(wit.verification.outcome == Outcome::Accept, "steep witness not Accept");

  const auto uniform = SequenceSource::stochastic(17, [](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(kUniformSamples);
    for (auto& x : v) x = u(rng);
    return v;
  }, "uniform");
  const auto mono = extract_downward_witness(uniform, w);
  l.require(mono.verification.outcome == Outcome::Accept, "uniform witness not Accept");
  if (l.pass)
    l.detail = "steep witness " + std::to_string(wit.values.size()) + " terms, uniform witness " +
               std::to_string(mono.values.size()) + " terms";
  return l;
}

const Corpus& mid_corpus() {
  static const Corpus c = [] {
    CorpusOptions o;
    o.horizon = (std::uint64_t{1} << 17) + 1;
    return make_default_corpus(o);
  }();
  return c;
}

Line sum_inequality() {
  Line l;
  const auto w = WeightSequence::statistical((std::uint64_t{1} << 17) + 1);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  auto random_fn = [&](int i) {
    if (i % 2 == 0) return affine(coef(rng), coef(rng));
    std::vector<std::pair<double, double>> knots;
    for (int j = 0; j < 7; ++j) knots.emplace_back(-1000.0 + 400.0 * j + coef(rng), coef(rng) * 300);
    std::sort(knots.begin(), knots.end());
    return piecewise_linear(knots, "pwl" + std::to_string(i));
  };
  std::uint64_t comparisons = 0;
  for (int i = 0; i < kClosurePairs; ++i) {
    const auto f = random_fn(i);
    const auto g = random_fn(i + 1);
    const auto c = sum_count_inequality(f, g, mid_corpus(), w);
    comparisons += c.comparisons;
    l.require(c.holds(), "pair " + std::to_string(i) + ": " + c.first_failure);
  }
  if (l.pass) l.detail = std::to_string(comparisons) + " comparisons hold";
  return l;
}

Line chain() {
  Line l;
  const auto& corpus = default_corpus();
  const auto w = WeightSequence::statistical(corpus.front().source.horizon());
  int passing = 0;
  for (const auto& f : chain_functions()) {
    if (passing == kChainFunctions) break;
    const auto r = chain_check(f, corpus, w);
    if (r.downward.summary != Preservation::Preserved) continue;
    ++passing;
    l.require(r.ward.summary != Preservation::Violated, f.label + " ward Violated");
    l.require(r.deviation.summary != Preservation::Violated, f.label + " deviation Violated");
    for (const auto& row : r.interleavings) {
      l.require(row.interleaved.outcome != Outcome::Reject,
                f.label + " " + row.construction + "(" + row.label + ") Reject");
      l.require(row.image.outcome != Outcome::Reject,
                f.label + " image of " + row.construction + "(" + row.label + ") Reject");
    }
  }
  l.require(passing == kChainFunctions, "only " + std::to_string(passing) + " functions preserved");
  if (l.pass) l.detail = std::to_string(passing) + " functions consistent";
  return l;
}

Line counterexample() {
  Line l;
  const auto& corpus = default_corpus();
  const auto w = WeightSequence::statistical(corpus.front().source.horizon());
  const auto f = parse_function("neg");
  const auto ward = test_ward_continuity(f, corpus, w);
  const auto down = test_downward_continuity(f, corpus, w);
  l.require(ward.summary == Preservation::Preserved, "ward not Preserved");
  l.require(down.summary == Preservation::Violated, "downward not Violated");
  l.require(down.witness && *down.witness == "neg", "witness is not -k");
  if (l.pass) l.detail = "ward Preserved, downward Violated by -k";
  return l;
}

Line uniform_continuity() {
  Line l;
  const auto w = WeightSequence::statistical(1 << 14);
  const auto t0 = std::chrono::steady_clock::now();
  const auto sq = falsify_uniform_continuity(parse_function("square"), {0.0, 1e6}, w);
  const double secs = seconds_since(t0);
  l.require(sq.has_value(), "no counterexample for x^2");
  l.require(secs < kFalsifySeconds, "x^2 search took " + num(secs) + " s");
  if (sq) {
    for (std::size_t n = 1; n <= sq->alpha.size(); ++n) {
      const double a = sq->alpha[n - 1], b = sq->beta[n - 1];
      l.require(std::fabs(a - b) < 1.0 / double(n) && a * a - b * b >= sq->eps0,
                "pair " + std::to_string(n) + " invalid");
    }
    l.require(sq->input.outcome == Outcome::Accept && sq->image.outcome == Outcome::Reject,
              "interleaving verdicts");
  }
  l.require(!falsify_uniform_continuity(identity_function(), {-1e6, 1e6}, w), "x falsified");
  l.require(!falsify_uniform_continuity(parse_function("sin"), {-1e6, 1e6}, w), "sin falsified");

  const std::uint64_t h = (std::uint64_t{1} << 20) + 1;
  const auto wh = WeightSequence::statistical(h);
  const auto uc = uc_image_check(scale(0.5, identity_function()),
                                 {SequenceSource::closed_form("sqrt(k)", h, "sqrt")}, wh);
  l.require(uc.bound_checked && uc.passed(), "k0 bound for x/2 on sqrt k");
  if (l.pass) l.detail = "x^2 found in " + num(secs) + " s at eps0=" + num(sq->eps0);
  return l;
}

Line uniform_limit() {
  Line l;
  const auto w = WeightSequence::statistical((std::uint64_t{1} << 17) + 1);
  const auto r = uniform_limit_check(shift_family(), mid_corpus(), w);
  std::uint64_t comparisons = 0;
  for (const auto& row : r.rows) {
    comparisons += row.inequality.comparisons;
    l.require(row.inequality.holds(), "eps=" + num(row.epsilon) + ": " + row.inequality.first_failure);
  }
  l.require(r.passed(), "report not passed");
  if (l.pass) l.detail = std::to_string(comparisons) + " comparisons hold";
  return l;
}

Line simulators() {
  Line l;
  const auto t0 = std::chrono::steady_clock::now();
  const auto exact = pairing_exact_values(kPairingEnumerationLimit);
  l.require(exact[1] == 1.0 && exact[2] == 0.0, "pairing alpha_1 or alpha_2");
  for (std::uint64_t n = 3; n <= kPairingEnumerationLimit; ++n) {
    const std::vector<double> lower(exact.begin(), exact.begin() + n);
    const auto e = pairing_monte_carlo(n, lower, kSimTrials, 100 + n);
    l.require(std::fabs(e.mean - exact[n]) <= kStandardErrors * e.standard_error + 1e-12,
              "pairing n=" + std::to_string(n) + " off by " + num(e.mean - exact[n]));
  }
  const std::uint64_t cutoff = 64;
  const auto texact = ternary_exact_expectations(cutoff);
  for (std::uint64_t k = 0; k <= cutoff; ++k) {
    l.require(texact[k] >= 0.0, "ternary negative at " + std::to_string(k));
    if (k > 0) l.require(texact[k] >= texact[k - 1], "ternary not monotone at " + std::to_string(k));
  }
  for (std::uint64_t k = 2; k <= cutoff; k += 6) {
    const auto e = ternary_monte_carlo(k, kSimTrials, 200 + k, 1);
    l.require(std::fabs(e.mean - texact[k]) <= kStandardErrors * e.standard_error,
              "ternary k=" + std::to_string(k) + " off by " + num(e.mean - texact[k]));
  }
  SimConfig cfg;
  cfg.max_n = 128;
  cfg.trials = kSimTrials;
  cfg.exact_cutoff = kPairingEnumerationLimit;
  const auto pairing = pairing_survivor_sequence(cfg);
  cfg.exact_cutoff = 16;
  const auto ternary = ternary_split_sequence(cfg);
  ClassifyConfig wide;
  wide.tolerances.accept = kSimTauAccept;
  const auto w = WeightSequence::statistical(cfg.max_n);
  const auto down = ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);
  const auto vp = classify(pairing.source, w, down, wide);
  const auto vt = classify(ternary.source, w, down, wide);
  l.require(vp.outcome != Outcome::Reject, "pairing sequence Reject");
  l.require(vt.outcome != Outcome::Reject, "ternary sequence Reject");
  const double secs = seconds_since(t0);
  l.require(secs < kSimSeconds, "took " + num(secs) + " s");
  if (l.pass)
    l.detail = std::string("pairing ") + to_string(vp.outcome) + ", ternary " + to_string(vt.outcome) +
               ", " + num(secs) + " s";
  return l;
}

std::string run_cli_text(const std::vector<const char*>& args) {
  std::vector<const char*> argv{"rhostat"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  cli::run_cli(int(argv.size()), argv.data(), out, err);
  std::string s = out.str();
  const auto at = s.find("\"timestamp\"");
  if (at != std::string::npos) s.erase(at, s.find('\n', at) - at);
  return s;
}

Line determinism() {
  Line l;
  const std::vector<const char*> args{"classify", "--seq", "builtin:pairing", "--rho", "statistical",
                                      "--class", "implications", "--n-max", "128", "--seed", "9"};
  const auto a = run_cli_text(args);
  const auto b = run_cli_text(args);
  l.require(!a.empty(), "empty report");
  l.require(a == b, "reports differ");
  if (l.pass) l.detail = std::to_string(a.size()) + " identical bytes";
  return l;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Line()>> criteria[] = {
      {"density oracle equivalence", density_oracle},
      {"classifier ground truth", classifier_ground_truth},
      {"constructive compactness suite", compactness_suite},
      {"sum count inequality", sum_inequality},
      {"chain of preservations", chain},
      {"negation counterexample", counterexample},
      {"uniform continuity pair", uniform_continuity},
      {"uniform limit", uniform_limit},
      {"simulators", simulators},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Line l;
    try {
      l = fn();
    } catch (const std::exception& e) {
      l.pass = false;
      l.detail = std::string("exception: ") + e.what();
    }
    failed += !l.pass;
    std::printf("[%s] criterion %d: %s: %s\n", l.pass ? "PASS" : "FAIL", index, name,
                l.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
