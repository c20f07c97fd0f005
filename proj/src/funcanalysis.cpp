#include "rhostat/funcanalysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rhostat/error.hpp"
#include "rhostat/simulate.hpp"

namespace rhostat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

RealFunction make(std::string label, std::function<double(double)> fn,
                  std::optional<double> lipschitz, double lo = -kInf, double hi = kInf) {
  RealFunction f;
  f.eval = std::move(fn);
  f.label = std::move(label);
  f.lo = lo;
  f.hi = hi;
  f.lipschitz = lipschitz;
  return f;
}

double parse_double(std::string_view text, std::string_view context) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    fail(ErrorCode::ParseError, "expected a number in '" + std::string(context) + "', got '" + s + "'");
  return v;
}

std::pair<double, double> parse_pair(std::string_view args, std::string_view context) {
  const auto comma = args.find(',');
  if (comma == std::string_view::npos)
    fail(ErrorCode::ParseError, "expected two comma-separated numbers in '" + std::string(context) + "'");
  return {parse_double(args.substr(0, comma), context), parse_double(args.substr(comma + 1), context)};
}

std::vector<std::pair<double, double>> read_knots(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open knot file '" + path + "'");
  std::vector<std::pair<double, double>> knots;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    knots.push_back(parse_pair(body, path + ":" + std::to_string(line_no)));
  }
  return knots;
}

}  // namespace

// --- functions --------------------------------------------------------------

RealFunction identity_function() {
  return make("identity", [](double x) { return x; }, 1.0);
}

RealFunction affine(double a, double b) {
  return make("affine:" + format_number(a) + "," + format_number(b),
              [a, b](double x) { return a * x + b; }, std::fabs(a));
}

RealFunction constant_function(double c) {
  return make("const:" + format_number(c), [c](double) { return c; }, 0.0);
}

RealFunction piecewise_linear(std::vector<std::pair<double, double>> knots, std::string label) {
  if (knots.size() < 2) fail(ErrorCode::InvalidConfig, "a piecewise-linear function needs 2 knots");
  std::sort(knots.begin(), knots.end());
  double lipschitz = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double dx = knots[i].first - knots[i - 1].first;
    if (!(dx > 0.0)) fail(ErrorCode::InvalidConfig, "piecewise-linear knots need distinct x");
    lipschitz = std::max(lipschitz, std::fabs((knots[i].second - knots[i - 1].second) / dx));
  }
  auto shared = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(knots));
  return make(std::move(label),
              [shared](double x) {
                const auto& k = *shared;
                auto it = std::upper_bound(k.begin(), k.end(), x,
                                           [](double v, const auto& knot) { return v < knot.first; });
                std::size_t hi = static_cast<std::size_t>(it - k.begin());
                hi = std::clamp<std::size_t>(hi, 1, k.size() - 1);
                const auto& [x0, y0] = k[hi - 1];
                const auto& [x1, y1] = k[hi];
                return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
              },
              lipschitz);
}

RealFunction sum(const RealFunction& f, const RealFunction& g) {
  std::optional<double> lip;
  if (f.lipschitz && g.lipschitz) lip = *f.lipschitz + *g.lipschitz;
  return make("(" + f.label + ")+(" + g.label + ")",
              [f, g](double x) { return f(x) + g(x); }, lip, std::max(f.lo, g.lo),
              std::min(f.hi, g.hi));
}

RealFunction compose(const RealFunction& g, const RealFunction& f) {
  std::optional<double> lip;
  if (f.lipschitz && g.lipschitz) lip = *f.lipschitz * *g.lipschitz;
  return make("(" + g.label + ")o(" + f.label + ")",
              [f, g](double x) {
                const double y = f(x);
                if (!g.contains(y)) {
                  fail(ErrorCode::DomainViolation, "composition: " + f.label + " maps " +
                                                       format_number(x) + " to " + format_number(y) +
                                                       ", outside the domain of " + g.label);
                }
                return g(y);
              },
              lip, f.lo, f.hi);
}

RealFunction scale(double c, const RealFunction& f) {
  std::optional<double> lip;
  if (f.lipschitz) lip = std::fabs(c) * *f.lipschitz;
  return make(format_number(c) + "*(" + f.label + ")", [c, f](double x) { return c * f(x); }, lip,
              f.lo, f.hi);
}

RealFunction parse_function(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const auto no_args = [&]() {
    if (colon != std::string_view::npos)
      fail(ErrorCode::ParseError, "function '" + std::string(head) + "' takes no arguments");
  };
  if (head == "identity") { no_args(); return identity_function(); }
  if (head == "neg") { no_args(); return make("neg", [](double x) { return -x; }, 1.0); }
  if (head == "square") { no_args(); return make("square", [](double x) { return x * x; }, std::nullopt); }
  if (head == "sin") { no_args(); return make("sin", [](double x) { return std::sin(x); }, 1.0); }
  if (head == "cos") { no_args(); return make("cos", [](double x) { return std::cos(x); }, 1.0); }
  if (head == "atan") { no_args(); return make("atan", [](double x) { return std::atan(x); }, 1.0); }
  if (head == "tanh") { no_args(); return make("tanh", [](double x) { return std::tanh(x); }, 1.0); }
  if (head == "abs") { no_args(); return make("abs", [](double x) { return std::fabs(x); }, 1.0); }
  if (head == "softsign") {
    no_args();
    return make("softsign", [](double x) { return x / (1.0 + std::fabs(x)); }, 1.0);
  }
  if (head == "affine") {
    const auto [a, b] = parse_pair(args, spec);
    return affine(a, b);
  }
  if (head == "scale") {
    const double c = parse_double(args, spec);
    return scale(c, identity_function());
  }
  if (head == "const") return constant_function(parse_double(args, spec));
  if (head == "clamp") {
    const auto [lo, hi] = parse_pair(args, spec);
    if (!(lo <= hi)) fail(ErrorCode::ParseError, "clamp needs lo <= hi");
    return make("clamp:" + format_number(lo) + "," + format_number(hi),
                [lo, hi](double x) { return std::clamp(x, lo, hi); }, 1.0);
  }
  if (head == "lipschitz-pwl") {
    if (args.empty()) fail(ErrorCode::ParseError, "lipschitz-pwl needs a knot file path");
    return piecewise_linear(read_knots(std::string(args)), "lipschitz-pwl:" + std::string(args));
  }
  fail(ErrorCode::UnknownName, "unknown function '" + std::string(spec) + "'");
}

const char* to_string(Preservation p) noexcept {
  switch (p) {
    case Preservation::Preserved: return "Preserved";
    case Preservation::Violated: return "Violated";
    case Preservation::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

const char* to_string(Property p) noexcept {
  switch (p) {
    case Property::Downward: return "downward";
    case Property::Ward: return "ward";
    case Property::Deviation: return "deviation";
  }
  return "unknown";
}

// --- preservation ---------------------------------------------------------------

SequenceSource apply(const RealFunction& f, const SequenceSource& alpha, std::uint64_t length) {
  if (length == 0 || length > alpha.horizon()) length = alpha.horizon();
  const Prefix p = alpha.prefix(length);
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double x = p.values[i];
    if (!f.contains(x)) {
      throw IndexedError(ErrorCode::DomainViolation,
                         "sequence '" + alpha.label() + "': alpha_" + std::to_string(i + 1) + " = " +
                             format_number(x) + " is outside the domain [" + format_number(f.lo) +
                             ", " + format_number(f.hi) + "] of " + f.label,
                         i + 1);
    }
    out[i] = f(x);
  }
  return SequenceSource::table(std::move(out), f.label + "(" + alpha.label() + ")",
                               SourceKind::Derived);
}

namespace {

ClassifyConfig entry_config(const ClassifyConfig& cfg, const CorpusEntry& entry) {
  ClassifyConfig out = cfg;
  if (entry.tolerances) out.tolerances = *entry.tolerances;
  return out;
}

ClassTag input_tag(Property property, const SequenceSource& alpha, const ClassifyConfig& cfg) {
  switch (property) {
    case Property::Downward: return ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);
    case Property::Ward: return ClassTag::of(ClassKind::RhoStatQuasiCauchy);
    case Property::Deviation: return ClassTag::convergent(estimate_level(alpha, cfg));
  }
  fail(ErrorCode::InvalidConfig, "unhandled property");
}

// Prefix length that classification of `source` actually reads.
std::uint64_t needed_length(const SequenceSource& source, const WeightSequence& weights,
                            const ClassifyConfig& cfg) {
  const auto grid = resolve_grid(source, weights, Predicate::Downward, cfg);
  return grid.empty() ? source.horizon() : grid.back() + 1;
}

Preservation summarize(const std::vector<PreservationRow>& rows, std::optional<std::string>* witness) {
  bool all_accept = true;
  for (const auto& row : rows) {
    if (row.input.outcome != Outcome::Accept || !row.image) continue;
    if (row.image->outcome == Outcome::Reject) {
      *witness = row.label;
      return Preservation::Violated;
    }
    if (row.image->outcome != Outcome::Accept) all_accept = false;
  }
  return all_accept ? Preservation::Preserved : Preservation::Inconclusive;
}

}  // namespace

PreservationReport test_preservation(const RealFunction& f, Property property,
                                     const Corpus& corpus, const WeightSequence& weights,
                                     const ClassifyConfig& cfg) {
  PreservationReport report;
  report.function = f.label;
  report.property = property;
  for (const auto& entry : corpus) {
    const SequenceSource& alpha = entry.source;
    const ClassifyConfig ecfg = entry_config(cfg, entry);
    const std::uint64_t length = std::min(alpha.horizon(), needed_length(alpha, weights, ecfg));
    const auto ext = kernels::extent(alpha.prefix(length).values);
    if (!f.contains(ext.min) || !f.contains(ext.max)) {
      fail(ErrorCode::DomainViolation,
           "sequence '" + alpha.label() + "' ranges over [" + format_number(ext.min) + ", " +
               format_number(ext.max) + "], outside the domain [" + format_number(f.lo) + ", " +
               format_number(f.hi) + "] of " + f.label);
    }
    const ClassTag tag = input_tag(property, alpha, ecfg);
    PreservationRow row{alpha.label(), classify(alpha, weights, tag, ecfg), std::nullopt};
    if (row.input.outcome == Outcome::Accept) {
      const SequenceSource image = apply(f, alpha, length);
      ClassTag image_tag = tag;
      if (property == Property::Deviation) image_tag.level = f(*tag.level);
      row.image = classify(image, weights, image_tag, ecfg);
    }
    report.rows.push_back(std::move(row));
  }
  report.summary = summarize(report.rows, &report.witness);
  return report;
}

PreservationReport test_downward_continuity(const RealFunction& f, const Corpus& corpus,
                                            const WeightSequence& weights,
                                            const ClassifyConfig& cfg) {
  return test_preservation(f, Property::Downward, corpus, weights, cfg);
}

PreservationReport test_ward_continuity(const RealFunction& f, const Corpus& corpus,
                                        const WeightSequence& weights, const ClassifyConfig& cfg) {
  return test_preservation(f, Property::Ward, corpus, weights, cfg);
}

// --- closure -------------------------------------------------------------------------

namespace {

std::vector<double> scaled(std::span<const double> eps, double factor) {
  std::vector<double> out(eps.begin(), eps.end());
  for (auto& e : out) e *= factor;
  return out;
}

void record(InequalityCheck& check, bool ok, const std::string& where) {
  ++check.comparisons;
  if (ok) return;
  if (check.failures++ == 0) check.first_failure = where;
}

}  // namespace

InequalityCheck sum_count_inequality(const RealFunction& f, const RealFunction& g,
                                     const Corpus& corpus, const WeightSequence& weights,
                                     const ClassifyConfig& cfg) {
  InequalityCheck check;
  const RealFunction fg = sum(f, g);
  const auto half = scaled(cfg.eps_grid, 0.5);
  for (const auto& entry : corpus) {
    const SequenceSource& alpha = entry.source;
    const auto grid = resolve_grid(alpha, weights, Predicate::Downward, cfg);
    const std::uint64_t length = grid.back() + 1;
    const auto ps = density_profiles(apply(fg, alpha, length), weights, cfg.eps_grid,
                                     Predicate::Downward, std::nullopt, grid);
    const auto pf = density_profiles(apply(f, alpha, length), weights, half, Predicate::Downward,
                                     std::nullopt, grid);
    const auto pg = density_profiles(apply(g, alpha, length), weights, half, Predicate::Downward,
                                     std::nullopt, grid);
    for (std::size_t e = 0; e < ps.size(); ++e) {
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const auto lhs = ps[e].checkpoints[c].count;
        const auto rhs = pf[e].checkpoints[c].count + pg[e].checkpoints[c].count;
        record(check, lhs <= rhs,
               alpha.label() + " eps=" + format_number(cfg.eps_grid[e]) + " n=" +
                   std::to_string(grid[c]) + ": " + std::to_string(lhs) + " > " +
                   std::to_string(rhs));
      }
    }
  }
  return check;
}

ClosureReport closure_harness(const RealFunction& f, const RealFunction& g, const Corpus& corpus,
                              const WeightSequence& weights, const ClassifyConfig& cfg) {
  ClosureReport report;
  report.f = test_downward_continuity(f, corpus, weights, cfg);
  report.g = test_downward_continuity(g, corpus, weights, cfg);
  report.precondition_met = report.f.summary == Preservation::Preserved &&
                            report.g.summary == Preservation::Preserved;
  report.sum = test_downward_continuity(sum(f, g), corpus, weights, cfg);
  report.composition = test_downward_continuity(compose(g, f), corpus, weights, cfg);
  report.sum_inequality = sum_count_inequality(f, g, corpus, weights, cfg);
  return report;
}

// --- chain -----------------------------------------------------------------------------

ChainReport chain_check(const RealFunction& f, const Corpus& corpus, const WeightSequence& weights,
                        const ClassifyConfig& cfg) {
  ChainReport report;
  report.downward = test_downward_continuity(f, corpus, weights, cfg);
  report.ward = test_ward_continuity(f, corpus, weights, cfg);
  report.deviation = test_preservation(f, Property::Deviation, corpus, weights, cfg);

  const ClassTag downward = ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);
  const auto run = [&](const CorpusEntry& entry, const SequenceSource& inter, const char* name) {
    const ClassifyConfig ecfg = entry_config(cfg, entry);
    InterleaveRow row;
    row.label = entry.source.label();
    row.construction = name;
    row.interleaved = classify(inter, weights, downward, ecfg);
    const SequenceSource image = apply(f, inter, needed_length(inter, weights, ecfg));
    row.image = classify(image, weights, downward, ecfg);
    report.interleavings.push_back(std::move(row));
  };
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (report.ward.rows[i].input.outcome == Outcome::Accept)
      run(corpus[i], zigzag_interleave(corpus[i].source), "zigzag");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Verdict& input = report.deviation.rows[i].input;
    if (input.outcome == Outcome::Accept)
      run(corpus[i], limit_interleave(corpus[i].source, *input.evidence.front().level), "limit");
  }

  if (report.downward.summary == Preservation::Preserved) {
    report.consistent = report.ward.summary != Preservation::Violated &&
                        report.deviation.summary != Preservation::Violated;
    for (const auto& row : report.interleavings) {
      if (row.interleaved.outcome == Outcome::Reject || row.image.outcome == Outcome::Reject)
        report.consistent = false;
    }
  }
  return report;
}

// --- image compactness ------------------------------------------------------------------

ImageCompactnessReport image_compactness_check(const RealFunction& f,
                                               const std::vector<SequenceSource>& samples,
                                               const Corpus& corpus,
                                               const WeightSequence& weights,
                                               const ExtractConfig& cfg) {
  ImageCompactnessReport report;
  const auto pre = test_downward_continuity(f, corpus, weights, cfg.classify);
  if (pre.summary != Preservation::Preserved) {
    report.skipped = true;
    report.reason = f.label + " is " + to_string(pre.summary) +
                    " for downward continuity on the corpus";
    return report;
  }
  for (const auto& sample : samples) {
    ImageWitnessRow row;
    row.label = sample.label();
    row.witness = extract_downward_witness(sample, weights, cfg);
    std::vector<double> image(row.witness.values.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
      const double x = row.witness.values[i];
      if (!f.contains(x))
        fail(ErrorCode::DomainViolation, "witness value " + format_number(x) + " of '" +
                                             sample.label() + "' is outside the domain of " + f.label);
      image[i] = f(x);
    }
    const auto src = SequenceSource::table(std::move(image), f.label + "(" + row.witness.label + ")",
                                           SourceKind::Derived);
    row.image = classify(src, weights, ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy),
                         witness_config(cfg.classify, src.horizon()));
    report.rows.push_back(std::move(row));
  }
  return report;
}

// --- uniform continuity ------------------------------------------------------------------

namespace {

struct Pair {
  double x = 0.0;
  double y = 0.0;
  double gap = -1.0;  // |f(y) - f(x)|
};

Pair evaluate(const RealFunction& f, const DomainSampler& s, double x, double delta) {
  x = std::clamp(x, s.lo, s.hi);
  double y = x + delta;
  if (y > s.hi) {
    y = x;
    x = y - delta;
    if (x < s.lo) return {};
  }
  const double fx = f(x);
  const double fy = f(y);
  if (!std::isfinite(fx) || !std::isfinite(fy)) return {};
  return {x, y, std::fabs(fy - fx)};
}

// Best pair for index n, or one with gap >= eps0 as soon as it is found.
std::optional<Pair> search_pair(const RealFunction& f, const DomainSampler& s, std::uint64_t n,
                                double eps0, std::uint64_t salt, const FalsifyConfig& cfg) {
  const double limit = 1.0 / static_cast<double>(n);
  // Strictly below 1/n.
  const double widest = std::nextafter(limit, 0.0);
  std::mt19937_64 rng(derive_seed(cfg.seed, n, salt));
  std::uniform_real_distribution<double> xs(s.lo, s.hi);
  std::uniform_real_distribution<double> ds(0.0, 1.0);
  Pair best;
  for (std::uint64_t d = 0; d < cfg.draws_per_n; ++d) {
    const double delta = std::max(ds(rng), 1e-12) * widest;
    const Pair p = evaluate(f, s, xs(rng), delta);
    if (p.gap > best.gap) best = p;
    if (best.gap >= eps0) return best;
  }
  if (best.gap < 0.0) return std::nullopt;
  // Grid refinement: 11 points around the best x, shrinking x10 per round,
  // always at the widest admissible separation.
  double center = best.x;
  double half_width = (s.hi - s.lo) / static_cast<double>(std::max<std::uint64_t>(cfg.draws_per_n, 1));
  for (std::uint64_t round = 0; round < cfg.refine_rounds; ++round) {
    for (int j = -5; j <= 5; ++j) {
      const Pair p = evaluate(f, s, center + half_width * j / 5.0, widest);
      if (p.gap > best.gap) best = p;
    }
    if (best.gap >= eps0) return best;
    center = best.x;
    half_width /= 10.0;
  }
  return std::nullopt;
}

// Shrinks the separation by bisection while the gap stays >= eps0.
Pair tighten(const RealFunction& f, const DomainSampler& s, Pair p, double eps0) {
  double lo = 0.0;
  double hi = p.y - p.x;
  for (int it = 0; it < 60 && hi - lo > 0.0; ++it) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    const Pair q = evaluate(f, s, p.x, mid);
    if (q.gap >= eps0 && q.x == p.x) {
      hi = mid;
      p = q;
    } else {
      lo = mid;
    }
  }
  return p;
}

}  // namespace

std::optional<UcCounterexample> falsify_uniform_continuity(const RealFunction& f,
                                                           const DomainSampler& sampler,
                                                           const WeightSequence& weights,
                                                           const FalsifyConfig& cfg) {
  if (!(sampler.lo < sampler.hi) || !std::isfinite(sampler.lo) || !std::isfinite(sampler.hi))
    fail(ErrorCode::InvalidConfig, "the domain sampler needs a finite interval lo < hi");
  if (sampler.lo < f.lo || sampler.hi > f.hi)
    fail(ErrorCode::DomainViolation, "the sampler interval leaves the domain of " + f.label);
  if (cfg.pairs < 8) fail(ErrorCode::InvalidConfig, "the falsifier needs at least 8 pairs");

  for (std::size_t e = 0; e < cfg.eps0_grid.size(); ++e) {
    const double eps0 = cfg.eps0_grid[e];
    std::vector<double> alpha, beta;
    bool complete = true;
    for (std::uint64_t n = 1; n <= cfg.pairs; ++n) {
      const auto found = search_pair(f, sampler, n, eps0, e, cfg);
      if (!found || found->gap < eps0) {
        complete = false;
        break;
      }
      const Pair p = tighten(f, sampler, *found, eps0);
      // Orient so the image rises from beta to alpha.
      if (f(p.y) >= f(p.x)) {
        alpha.push_back(p.y);
        beta.push_back(p.x);
      } else {
        alpha.push_back(p.x);
        beta.push_back(p.y);
      }
    }
    if (!complete) continue;

    std::vector<std::uint64_t> idx = monotone_indices(alpha);
    std::vector<double> a, b;
    for (const auto i : idx) {
      a.push_back(alpha[i - 1]);
      b.push_back(beta[i - 1]);
    }
    SequenceSource inter = materialize(pair_interleave(SequenceSource::table(std::move(b), "beta"),
                                                       SequenceSource::table(std::move(a), "alpha")));
    const ClassifyConfig wcfg = witness_config(cfg.classify, inter.horizon());
    const ClassTag downward = ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);
    Verdict input = classify(inter, weights, downward, wcfg);
    Verdict image = classify(apply(f, inter), weights, downward, wcfg);
    return UcCounterexample{eps0,
                            std::move(alpha),
                            std::move(beta),
                            IndexSubsequence(std::move(idx)),
                            std::move(inter),
                            std::move(input),
                            std::move(image)};
  }
  return std::nullopt;
}

std::uint64_t quasi_cauchy_tail_index(const SequenceSource& alpha, double delta,
                                      std::uint64_t n_max) {
  if (!(delta < kInf)) return 0;
  n_max = std::min(n_max, alpha.horizon() == 0 ? 0 : alpha.horizon() - 1);
  const Prefix p = alpha.prefix(n_max + 1);
  for (std::uint64_t k = n_max; k >= 1; --k) {
    if (std::fabs(p.values[k] - p.values[k - 1]) >= delta) return k;
  }
  return 0;
}

bool UcImageReport::passed() const {
  bool any = false;
  for (const auto& row : rows) {
    if (row.input.outcome != Outcome::Accept) continue;
    any = true;
    if (!row.image || row.image->outcome != Outcome::Accept) return false;
    for (const auto& b : row.bounds)
      if (!b.check.holds()) return false;
  }
  return any;
}

UcImageReport uc_image_check(const RealFunction& f, const std::vector<SequenceSource>& qc_corpus,
                             const WeightSequence& weights, const ClassifyConfig& cfg) {
  UcImageReport report;
  report.function = f.label;
  report.bound_checked = f.lipschitz.has_value();
  const ClassTag downward = ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy);
  for (const auto& alpha : qc_corpus) {
    UcImageRow row;
    row.label = alpha.label();
    row.input = classify(alpha, weights, ClassTag::of(ClassKind::QuasiCauchy), cfg);
    if (row.input.outcome == Outcome::Accept) {
      const SequenceSource image = apply(f, alpha, needed_length(alpha, weights, cfg));
      row.image = classify(image, weights, downward, cfg);
      if (f.lipschitz) {
        for (const auto& profile : row.image->evidence) {
          UcBound b;
          b.epsilon = profile.epsilon;
          b.delta = *f.lipschitz > 0.0 ? profile.epsilon / *f.lipschitz : kInf;
          b.k0 = quasi_cauchy_tail_index(alpha, b.delta, profile.checkpoints.back().n);
          for (const auto& cp : profile.checkpoints) {
            record(b.check, cp.count <= b.k0,
                   "eps=" + format_number(b.epsilon) + " n=" + std::to_string(cp.n) + ": count " +
                       std::to_string(cp.count) + " > k0 " + std::to_string(b.k0));
          }
          row.bounds.push_back(std::move(b));
        }
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

// --- uniform limits ---------------------------------------------------------------------

FunctionFamily shift_family() {
  FunctionFamily fam;
  fam.label = "x+1/n";
  fam.member = [](std::uint64_t n) {
    RealFunction f = affine(1.0, 1.0 / static_cast<double>(n));
    f.label = "x+1/" + std::to_string(n);
    return f;
  };
  fam.limit = identity_function();
  fam.error_bound = [](std::uint64_t n) { return 1.0 / static_cast<double>(n); };
  return fam;
}

FunctionFamily bernstein_family(const RealFunction& g, double second_derivative_bound) {
  if (!(second_derivative_bound >= 0.0))
    fail(ErrorCode::InvalidConfig, "the second-derivative bound must be non-negative");
  if (g.lo > 0.0 || g.hi < 1.0)
    fail(ErrorCode::DomainViolation, "Bernstein approximation needs " + g.label + " on [0, 1]");
  FunctionFamily fam;
  fam.label = "bernstein(" + g.label + ")";
  fam.limit = g;
  fam.limit.lo = 0.0;
  fam.limit.hi = 1.0;
  fam.member = [g](std::uint64_t n) {
    auto coef = std::make_shared<std::vector<double>>(n + 1);
    for (std::uint64_t j = 0; j <= n; ++j)
      (*coef)[j] = g(static_cast<double>(j) / static_cast<double>(n));
    return make("B_" + std::to_string(n) + "(" + g.label + ")",
                [coef](double x) {
                  // de Casteljau on a scratch copy.
                  std::vector<double> b(*coef);
                  for (std::size_t r = 1; r < b.size(); ++r)
                    for (std::size_t j = 0; j + r < b.size(); ++j)
                      b[j] = (1.0 - x) * b[j] + x * b[j + 1];
                  return b[0];
                },
                std::nullopt, 0.0, 1.0);
  };
  const double m = second_derivative_bound;
  fam.error_bound = [m](std::uint64_t n) { return m / (8.0 * static_cast<double>(n)); };
  return fam;
}

FunctionFamily clipped_square_family(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorCode::InvalidConfig, "clip domain needs b > 0");
  FunctionFamily fam;
  fam.label = "min(x^2,n)";
  fam.limit = make("square", [](double x) { return x * x; }, 2.0 * b, -b, b);
  fam.member = [b](std::uint64_t n) {
    const double cap = static_cast<double>(n);
    return make("min(x^2," + std::to_string(n) + ")",
                [cap](double x) { return std::min(x * x, cap); }, 2.0 * b, -b, b);
  };
  fam.error_bound = [b](std::uint64_t n) {
    const double cap = static_cast<double>(n);
    return cap >= b * b ? 0.0 : b * b - cap;
  };
  return fam;
}

namespace {

std::uint64_t choose_member(const FunctionFamily& fam, double target) {
  constexpr std::uint64_t kTop = std::uint64_t{1} << 40;
  std::uint64_t hi = 1;
  while (hi <= kTop && !(fam.error_bound(hi) < target)) hi <<= 1;
  if (hi > kTop)
    fail(ErrorCode::InvalidConfig, "family " + fam.label + " never gets within " +
                                       format_number(target) + " of its limit");
  std::uint64_t lo = hi / 2;  // error_bound(lo) >= target, or lo == 0
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fam.error_bound(mid) < target) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

bool UniformLimitReport::passed() const {
  for (const auto& row : rows)
    if (!row.inequality.holds()) return false;
  for (std::size_t i = 0; i < member.rows.size() && i < limit.rows.size(); ++i) {
    const auto& m = member.rows[i];
    if (m.input.outcome != Outcome::Accept || !m.image || m.image->outcome != Outcome::Accept)
      continue;
    const auto& l = limit.rows[i];
    if (!l.image || l.image->outcome != Outcome::Accept) return false;
  }
  return !rows.empty();
}

UniformLimitReport uniform_limit_check(const FunctionFamily& family, const Corpus& corpus,
                                       const WeightSequence& weights, const ClassifyConfig& cfg) {
  if (!family.member || !family.error_bound)
    fail(ErrorCode::InvalidConfig, "family '" + family.label + "' has no uniform error bound");
  UniformLimitReport report;
  report.family = family.label;
  std::uint64_t last_n = 1;
  for (const double eps : cfg.eps_grid) {
    UniformLimitRow row;
    row.epsilon = eps;
    row.n = choose_member(family, eps / 3.0);
    row.error = family.error_bound(row.n);
    last_n = row.n;
    const RealFunction fn = family.member(row.n);
    const double e1[] = {eps};
    const double e3[] = {eps / 3.0};
    for (const auto& entry : corpus) {
      const SequenceSource& alpha = entry.source;
      const auto grid = resolve_grid(alpha, weights, Predicate::Downward, cfg);
      const std::uint64_t length = grid.back() + 1;
      const auto pf = density_profiles(apply(family.limit, alpha, length), weights, e1,
                                       Predicate::Downward, std::nullopt, grid);
      const auto pn = density_profiles(apply(fn, alpha, length), weights, e3, Predicate::Downward,
                                       std::nullopt, grid);
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const auto lhs = pf[0].checkpoints[c].count;
        const auto rhs = pn[0].checkpoints[c].count;
        record(row.inequality, lhs <= rhs,
               alpha.label() + " eps=" + format_number(eps) + " n=" + std::to_string(grid[c]) +
                   ": " + std::to_string(lhs) + " > " + std::to_string(rhs));
      }
    }
    report.rows.push_back(std::move(row));
  }
  report.member = test_downward_continuity(family.member(last_n), corpus, weights, cfg);
  report.limit = test_downward_continuity(family.limit, corpus, weights, cfg);
  return report;
}

}  // namespace rhostat
