#include "rhostat/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rhostat/error.hpp"

namespace rhostat {

namespace {

struct KindName {
  ClassKind kind;
  const char* display;
  const char* cli;
};

constexpr KindName kKindNames[] = {
    {ClassKind::QuasiCauchy, "QuasiCauchy", "qc"},
    {ClassKind::DownwardQuasiCauchy, "DownwardQuasiCauchy", "downward-qc"},
    {ClassKind::RhoStatQuasiCauchy, "RhoStatQuasiCauchy", "rho-qc"},
    {ClassKind::RhoStatDownwardQuasiCauchy, "RhoStatDownwardQuasiCauchy", "rho-downward"},
    {ClassKind::RhoStatConvergent, "RhoStatConvergent", "rho-convergent"},
    {ClassKind::DownwardHalfCauchy, "DownwardHalfCauchy", "half-cauchy"},
    {ClassKind::LacunaryStatDownwardQuasiCauchy, "LacunaryStatDownwardQuasiCauchy",
     "lacunary-downward"},
};

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

const char* to_string(ClassKind kind) noexcept {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.display;
  return "unknown";
}

const char* cli_name(ClassKind kind) noexcept {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.cli;
  return "unknown";
}

ClassKind parse_class_kind(std::string_view name) {
  for (const auto& k : kKindNames)
    if (name == k.cli || name == k.display) return k.kind;
  std::string known;
  for (const auto& k : kKindNames) {
    if (!known.empty()) known += ", ";
    known += k.cli;
  }
  fail(ErrorCode::UnknownName, "unknown class '" + std::string(name) + "' (known: " + known + ")");
}

std::string ClassTag::describe() const {
  std::string out = to_string(kind);
  if (level) out += "(L=" + format_number(*level) + ")";
  if (theta) out += "(theta: " + std::to_string(theta->size() - 1) + " windows)";
  return out;
}

std::vector<std::uint64_t> resolve_grid(const SequenceSource& source,
                                        const WeightSequence& weights, Predicate predicate,
                                        const ClassifyConfig& cfg) {
  if (!cfg.n_grid.empty()) return cfg.n_grid;
  std::uint64_t n_max = std::min(max_checkpoint(source, predicate), weights.horizon());
  if (cfg.n_max > 0) n_max = std::min(n_max, cfg.n_max);
  return default_n_grid(n_max);
}

double estimate_level(const SequenceSource& source, const ClassifyConfig& cfg) {
  std::uint64_t m = source.horizon();
  if (cfg.n_max > 0) m = std::min(m, cfg.n_max);
  if (m == 0) fail(ErrorCode::DegenerateInput, "cannot estimate a level from an empty prefix");
  const Prefix p = source.prefix(m);
  std::vector<double> tail(p.values.begin() + static_cast<std::ptrdiff_t>(m / 2), p.values.end());
  const std::size_t mid = tail.size() / 2;
  std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(mid), tail.end());
  const double upper = tail[mid];
  if (tail.size() % 2 == 1) return upper;
  const double lower = *std::max_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

namespace {

void check_tolerances(const ClassifyConfig& cfg) {
  const auto& t = cfg.tolerances;
  if (!(t.accept > 0.0) || !(t.reject >= t.accept))
    fail(ErrorCode::InvalidConfig, "tolerances need 0 < tau_accept <= tau_reject");
  if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction < 1.0))
    fail(ErrorCode::InvalidConfig, "tail fraction must lie in (0, 1)");
}

// Half-open 0-based ranges of the tail [lo, hi) and of the tail of the
// shorter prefix [earlier_lo, lo). The earlier window is the same-fraction
// tail of the prefix that ends where the current tail starts, so comparing
// the two shows whether the tail statistic shrinks as the prefix grows.
struct TailWindows {
  std::size_t earlier_lo, lo, hi;
};

TailWindows tail_windows(std::size_t length, double fraction) {
  const auto cut = [fraction](std::size_t len) {
    return len - static_cast<std::size_t>(std::floor(static_cast<double>(len) * fraction));
  };
  const std::size_t lo = cut(length);
  return {cut(lo), lo, length};
}

// max over p <= q in [lo, hi) of v[q] - v[p]; 0 for an empty window.
double max_rise(std::span<const double> v, std::size_t lo, std::size_t hi) {
  double best = 0.0;
  if (lo >= hi) return best;
  double run_min = v[lo];
  for (std::size_t i = lo + 1; i < hi; ++i) {
    run_min = std::min(run_min, v[i]);
    best = std::max(best, v[i] - run_min);
  }
  return best;
}

Verdict tail_verdict(double tail_stat, double earlier_stat, const TailWindows& w,
                     const ClassifyConfig& cfg, const char* stat_name, std::size_t offset) {
  Verdict v;
  v.tolerances = cfg.tolerances;
  std::vector<Outcome> outcomes;
  std::string narrative;
  for (auto it = cfg.eps_grid.rbegin(); it != cfg.eps_grid.rend(); ++it) {
    const double eps = *it;
    Outcome o = Outcome::Inconclusive;
    if (tail_stat < eps) o = Outcome::Accept;
    else if (tail_stat >= earlier_stat) o = Outcome::Reject;
    outcomes.push_back(o);
    if (!narrative.empty()) narrative += "; ";
    narrative += "eps=" + format_number(eps) + " " + to_string(o);
  }
  v.outcome = combine_outcomes(outcomes);
  v.statistics = {{"tail_start", static_cast<double>(w.lo + offset)},
                  {"tail_end", static_cast<double>(w.hi - 1 + offset)},
                  {std::string(stat_name), tail_stat},
                  {std::string("earlier_") + stat_name, earlier_stat}};
  v.narrative = narrative + " (" + stat_name + "=" + format_number(tail_stat) + ", earlier " +
                format_number(earlier_stat) + ")";
  return v;
}

std::uint64_t tail_length(const SequenceSource& source, const ClassifyConfig& cfg,
                          std::uint64_t reserve) {
  std::uint64_t m = source.horizon();
  if (cfg.n_max > 0) m = std::min(m, cfg.n_max + reserve);
  if (m < kMinTailHorizon) {
    fail(ErrorCode::InsufficientEvidence,
         "pointwise tail checks need a prefix of at least " + std::to_string(kMinTailHorizon) +
             " terms; '" + source.label() + "' offers " + std::to_string(m));
  }
  return m;
}

Verdict classify_pointwise_qc(const SequenceSource& source, bool one_sided,
                              const ClassifyConfig& cfg) {
  const std::uint64_t m = tail_length(source, cfg, 1);
  const Prefix p = source.prefix(m);
  // Differences Delta alpha_k for k = 1..m-1 sit at 0-based positions [0, m-1).
  const TailWindows w = tail_windows(m - 1, cfg.tail_fraction);
  const auto sup = [&](std::size_t lo, std::size_t hi) {
    if (lo >= hi) return one_sided ? -INFINITY : 0.0;
    return one_sided ? kernels::max_delta(p.values, lo, hi)
                     : kernels::max_abs_delta(p.values, lo, hi);
  };
  return tail_verdict(sup(w.lo, w.hi), sup(w.earlier_lo, w.lo), w, cfg,
                      one_sided ? "tail_max_delta" : "tail_sup_abs_delta", 1);
}

Verdict classify_half_cauchy(const SequenceSource& source, const ClassifyConfig& cfg) {
  const std::uint64_t m = tail_length(source, cfg, 1);
  const Prefix p = source.prefix(m);
  const TailWindows w = tail_windows(m, cfg.tail_fraction);
  return tail_verdict(max_rise(p.values, w.lo, w.hi), max_rise(p.values, w.earlier_lo, w.lo), w,
                      cfg, "tail_max_rise", 1);
}

Verdict classify_lacunary(const SequenceSource& source, const ClassTag& tag,
                          const ClassifyConfig& cfg) {
  std::uint64_t limit = max_checkpoint(source, Predicate::Downward);
  if (cfg.n_max > 0) limit = std::min(limit, cfg.n_max);
  const std::vector<std::uint64_t> theta = tag.theta ? *tag.theta : default_theta(limit);
  Verdict out;
  out.tolerances = cfg.tolerances;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i) {
    if (i > 0 && !(cfg.eps_grid[i] < cfg.eps_grid[i - 1]))
      fail(ErrorCode::InvalidConfig, "epsilon grid must be strictly descending");
    DensityProfile prof = window_profile(source, cfg.eps_grid[i], Predicate::Downward,
                                         std::nullopt, theta);
    // Windows past the configured limit are dropped so n_max means the same
    // thing for every class.
    while (!prof.checkpoints.empty() && prof.checkpoints.back().n > limit)
      prof.checkpoints.pop_back();
    Verdict one = limit_verdict(prof, cfg.tolerances);
    out.per_profile.push_back(one.outcome);
    parts.push_back(std::move(one.narrative));
    out.evidence.push_back(std::move(prof));
  }
  out.outcome = combine_outcomes(out.per_profile);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (!out.narrative.empty()) out.narrative += "; ";
    out.narrative += *it;
  }
  return out;
}

}  // namespace

Verdict classify(const SequenceSource& source, const WeightSequence& weights, const ClassTag& tag,
                 const ClassifyConfig& cfg) {
  check_tolerances(cfg);
  if (tag.level && tag.kind != ClassKind::RhoStatConvergent)
    fail(ErrorCode::InvalidConfig, "a level only applies to RhoStatConvergent");
  if (tag.theta && tag.kind != ClassKind::LacunaryStatDownwardQuasiCauchy)
    fail(ErrorCode::InvalidConfig, "theta only applies to the lacunary class");
  if (cfg.eps_grid.empty()) fail(ErrorCode::InvalidConfig, "epsilon grid is empty");

  const auto weighted = [&](Predicate predicate, std::optional<double> level) {
    const auto grid = resolve_grid(source, weights, predicate, cfg);
    return eps_sweep(source, weights, predicate, level, cfg.eps_grid, grid, cfg.tolerances);
  };

  switch (tag.kind) {
    case ClassKind::QuasiCauchy: return classify_pointwise_qc(source, false, cfg);
    case ClassKind::DownwardQuasiCauchy: return classify_pointwise_qc(source, true, cfg);
    case ClassKind::RhoStatQuasiCauchy: return weighted(Predicate::Absolute, std::nullopt);
    case ClassKind::RhoStatDownwardQuasiCauchy: return weighted(Predicate::Downward, std::nullopt);
    case ClassKind::RhoStatConvergent:
      if (!tag.level) fail(ErrorCode::MissingLevel, "RhoStatConvergent needs a level");
      return weighted(Predicate::Deviation, tag.level);
    case ClassKind::DownwardHalfCauchy: return classify_half_cauchy(source, cfg);
    case ClassKind::LacunaryStatDownwardQuasiCauchy: return classify_lacunary(source, tag, cfg);
  }
  fail(ErrorCode::InvalidConfig, "unhandled class");
}

const std::vector<Implication>& known_implications() {
  static const std::vector<Implication> edges = {
      {ClassKind::RhoStatConvergent, ClassKind::RhoStatQuasiCauchy},
      {ClassKind::RhoStatQuasiCauchy, ClassKind::RhoStatDownwardQuasiCauchy},
      {ClassKind::RhoStatConvergent, ClassKind::RhoStatDownwardQuasiCauchy},
      {ClassKind::DownwardHalfCauchy, ClassKind::RhoStatDownwardQuasiCauchy},
      {ClassKind::QuasiCauchy, ClassKind::DownwardQuasiCauchy},
      {ClassKind::QuasiCauchy, ClassKind::RhoStatDownwardQuasiCauchy},
      {ClassKind::DownwardQuasiCauchy, ClassKind::RhoStatDownwardQuasiCauchy},
  };
  return edges;
}

const Verdict& ImplicationReport::verdict(ClassKind kind) const {
  for (const auto& row : rows)
    if (row.tag.kind == kind) return row.verdict;
  fail(ErrorCode::UnknownName, std::string("class ") + to_string(kind) + " not in report");
}

ImplicationReport implication_report(const SequenceSource& source, const WeightSequence& weights,
                                     const ClassifyConfig& cfg) {
  ImplicationReport report;
  report.label = source.label();
  report.level = estimate_level(source, cfg);
  const ClassTag tags[] = {
      ClassTag::of(ClassKind::QuasiCauchy),
      ClassTag::of(ClassKind::DownwardQuasiCauchy),
      ClassTag::of(ClassKind::RhoStatQuasiCauchy),
      ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy),
      ClassTag::convergent(report.level),
      ClassTag::of(ClassKind::DownwardHalfCauchy),
  };
  for (const auto& tag : tags) {
    ClassRow row{tag, {}};
    try {
      row.verdict = classify(source, weights, tag, cfg);
    } catch (const Error& e) {
      row.verdict.outcome = Outcome::Inconclusive;
      row.verdict.tolerances = cfg.tolerances;
      row.verdict.narrative = std::string("not evaluated: ") + e.what();
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& edge : known_implications()) {
    const Verdict& up = report.verdict(edge.upstream);
    const Verdict& down = report.verdict(edge.downstream);
    if (up.outcome == Outcome::Accept && down.outcome == Outcome::Reject) {
      report.anomalies.push_back({edge.upstream, edge.downstream,
                                  std::string(to_string(edge.upstream)) + " accepts but " +
                                      to_string(edge.downstream) + " rejects: " + down.narrative});
    }
  }
  return report;
}

}  // namespace rhostat
