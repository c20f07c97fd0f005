#include "rhostat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "rhostat/error.hpp"

namespace rhostat {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) noexcept {
  // splitmix64 finalizer over a combined key.
  const auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ chunk);
}

namespace {

constexpr std::uint64_t kChunk = 1024;
constexpr std::uint64_t kMinTrials = 1000;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Runs fn(chunk_index, trial_count) for every chunk and returns
// the per-chunk moments in chunk order, so the reduction never depends on
// thread scheduling.
std::vector<Moments> run_chunks(std::uint64_t trials,
                                const std::function<Moments(std::uint64_t, std::uint64_t)>& fn) {
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Moments> out(chunks);
  const auto work = [&](std::uint64_t c) {
    out[c] = fn(c, std::min(kChunk, trials - c * kChunk));
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(hw, chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) work(c);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint64_t c = t; c < chunks; c += workers) work(c);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

// Uniform draw in [0, range) by multiply-shift with rejection (Lemire); much
// cheaper than uniform_int_distribution in the pairing inner loop.
__extension__ using u128 = unsigned __int128;

std::uint64_t below(std::mt19937_64& rng, std::uint64_t range) {
  u128 m = static_cast<u128>(rng()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Estimate reduce(const std::vector<Moments>& parts, std::uint64_t trials) {
  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double t = static_cast<double>(trials);
  const double mean = total.sum / t;
  double var = trials > 1 ? (total.sum_sq - t * mean * mean) / (t - 1.0) : 0.0;
  if (var < 0.0) var = 0.0;
  return {mean, std::sqrt(var / t)};
}

void check_sim_config(const SimConfig& cfg, std::uint64_t min_n, std::uint64_t cutoff_limit,
                      const char* what) {
  if (cfg.max_n < min_n)
    fail(ErrorCode::InvalidConfig, std::string(what) + " needs max_n >= " + std::to_string(min_n));
  if (cfg.exact_cutoff < 1 || cfg.exact_cutoff > cutoff_limit)
    fail(ErrorCode::InvalidConfig, std::string(what) + " needs 1 <= exact_cutoff <= " +
                                       std::to_string(cutoff_limit));
  if (cfg.max_n > cfg.exact_cutoff && cfg.trials < kMinTrials)
    fail(ErrorCode::InvalidConfig, std::string(what) + " Monte Carlo needs at least " +
                                       std::to_string(kMinTrials) + " trials");
}

std::string sim_label(const char* name, const SimConfig& cfg) {
  return std::string(name) + "(max_n=" + std::to_string(cfg.max_n) + ",trials=" +
         std::to_string(cfg.trials) + ",seed=" + std::to_string(cfg.seed) +
         ",exact=" + std::to_string(cfg.exact_cutoff) + ")";
}

}  // namespace

// --- pairing removal ---------------------------------------------------------

std::vector<double> pairing_survivor_distribution(std::uint64_t n) {
  if (n < 2 || n > kPairingEnumerationLimit)
    fail(ErrorCode::InvalidConfig, "exact pairing enumeration covers 2 <= n <= " +
                                       std::to_string(kPairingEnumerationLimit));
  const std::size_t people = n;
  const std::size_t base = n - 1;
  // digit[i] in [0, n-2] encodes the target of person i, skipping i itself.
  std::vector<std::size_t> digit(people, 0);
  std::vector<std::uint32_t> hits(people, 0);
  std::size_t distinct = 0;
  const auto target = [](std::size_t i, std::size_t d) { return d < i ? d : d + 1; };
  for (std::size_t i = 0; i < people; ++i)
    if (hits[target(i, 0)]++ == 0) ++distinct;

  std::vector<std::uint64_t> counts(people + 1, 0);
  std::uint64_t patterns = 0;
  for (;;) {
    ++counts[people - distinct];
    ++patterns;
    std::size_t i = 0;
    for (; i < people; ++i) {
      if (--hits[target(i, digit[i])] == 0) --distinct;
      digit[i] = (digit[i] + 1) % base;
      if (hits[target(i, digit[i])]++ == 0) ++distinct;
      if (digit[i] != 0) break;
    }
    if (i == people) break;
  }
  std::vector<double> dist(people + 1);
  for (std::size_t u = 0; u <= people; ++u)
    dist[u] = static_cast<double>(counts[u]) / static_cast<double>(patterns);
  return dist;
}

std::vector<double> pairing_exact_values(std::uint64_t cutoff) {
  if (cutoff > kPairingEnumerationLimit)
    fail(ErrorCode::InvalidConfig, "exact pairing values stop at n = " +
                                       std::to_string(kPairingEnumerationLimit));
  std::vector<double> alpha(cutoff + 1, 0.0);
  if (cutoff >= 1) alpha[1] = 1.0;
  for (std::uint64_t n = 2; n <= cutoff; ++n) {
    const auto dist = pairing_survivor_distribution(n);
    double a = 0.0;
    // Someone is always selected, so U < n.
    for (std::uint64_t u = 0; u < n; ++u) a += dist[u] * alpha[u];
    alpha[n] = a;
  }
  return alpha;
}

Estimate pairing_monte_carlo(std::uint64_t n, std::span<const double> lower, std::uint64_t trials,
                             std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::InvalidConfig, "pairing Monte Carlo needs n >= 2");
  if (trials == 0) fail(ErrorCode::InvalidConfig, "pairing Monte Carlo needs trials > 0");
  if (lower.size() < n)
    fail(ErrorCode::InvalidConfig, "pairing Monte Carlo needs alpha_0..alpha_{n-1}");
  const auto parts = run_chunks(trials, [&](std::uint64_t chunk, std::uint64_t count) {
    std::mt19937_64 rng(derive_seed(seed, n, chunk));
    std::vector<std::uint64_t> stamp(n, 0);
    Moments m;
    for (std::uint64_t t = 1; t <= count; ++t) {
      std::uint64_t distinct = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t d = below(rng, n - 1);
        const std::uint64_t who = d < i ? d : d + 1;
        if (stamp[who] != t) {
          stamp[who] = t;
          ++distinct;
        }
      }
      const double x = lower[n - distinct];
      m.sum += x;
      m.sum_sq += x * x;
    }
    return m;
  });
  return reduce(parts, trials);
}

SimulatedSequence pairing_survivor_sequence(const SimConfig& cfg) {
  check_sim_config(cfg, 2, kPairingEnumerationLimit, "pairing simulation");
  const std::uint64_t exact_to = std::min(cfg.exact_cutoff, cfg.max_n);
  std::vector<double> alpha = pairing_exact_values(exact_to);
  std::vector<double> se(alpha.size(), 0.0);
  std::vector<bool> exact(alpha.size(), true);
  alpha.reserve(cfg.max_n + 1);
  for (std::uint64_t n = exact_to + 1; n <= cfg.max_n; ++n) {
    const Estimate e = pairing_monte_carlo(n, alpha, cfg.trials, cfg.seed);
    alpha.push_back(e.mean);
    se.push_back(e.standard_error);
    exact.push_back(false);
  }
  SimulatedSequence out{
      SequenceSource::table(std::vector<double>(alpha.begin() + 1, alpha.end()),
                            sim_label("pairing", cfg), SourceKind::Stochastic),
      std::vector<double>(se.begin() + 1, se.end()),
      std::vector<bool>(exact.begin() + 1, exact.end())};
  return out;
}

// --- ternary split -------------------------------------------------------------

namespace {

// split[k][a][b]: probability that k people split as (a, b, k - a - b),
// renormalized so each k sums to one in floating point. Without that the
// CDF would settle a few ulps away from 1 and the tail sum would never end.
using SplitTable = std::vector<std::vector<std::vector<double>>>;

SplitTable split_table(std::uint64_t cutoff) {
  SplitTable table(cutoff + 1);
  for (std::uint64_t k = 2; k <= cutoff; ++k) {
    auto& rows = table[k];
    rows.assign(k + 1, {});
    double total = 0.0;
    for (std::uint64_t a = 0; a <= k; ++a) {
      rows[a].resize(k - a + 1);
      for (std::uint64_t b = 0; a + b <= k; ++b) {
        const std::uint64_t c = k - a - b;
        const double log_p = std::lgamma(static_cast<double>(k) + 1.0) -
                             std::lgamma(static_cast<double>(a) + 1.0) -
                             std::lgamma(static_cast<double>(b) + 1.0) -
                             std::lgamma(static_cast<double>(c) + 1.0) -
                             static_cast<double>(k) * std::log(3.0);
        rows[a][b] = std::exp(log_p);
        total += rows[a][b];
      }
    }
    for (auto& row : rows)
      for (auto& p : row) p /= total;
  }
  return table;
}

// One step of F_k(t) from F_k(t-1) for every k <= cutoff.
std::vector<double> cdf_step(const std::vector<double>& prev, const SplitTable& split) {
  const std::size_t cutoff = prev.size() - 1;
  std::vector<double> next(prev.size(), 1.0);
  for (std::size_t k = 2; k <= cutoff; ++k) {
    double acc = 0.0;
    for (std::size_t a = 0; a <= k; ++a)
      for (std::size_t b = 0; a + b <= k; ++b)
        acc += split[k][a][b] * prev[a] * prev[b] * prev[k - a - b];
    next[k] = std::min(acc, 1.0);
  }
  return next;
}

std::vector<double> cdf_start(std::uint64_t cutoff) {
  std::vector<double> f(cutoff + 1, 0.0);
  for (std::size_t k = 0; k <= std::min<std::uint64_t>(cutoff, 1); ++k) f[k] = 1.0;
  return f;
}

constexpr double kTailTolerance = 1e-15;
constexpr std::uint64_t kMaxRounds = 10000;

// Rows t = 0, 1, ... until every 1 - F_k(t) is below the tolerance or the
// rows stop changing.
std::vector<std::vector<double>> converged_cdf(std::uint64_t cutoff) {
  const SplitTable split = split_table(cutoff);
  std::vector<std::vector<double>> rows{cdf_start(cutoff)};
  for (std::uint64_t t = 1; t < kMaxRounds; ++t) {
    const auto& last = rows.back();
    if (std::all_of(last.begin(), last.end(), [](double f) { return 1.0 - f < kTailTolerance; }))
      break;
    auto next = cdf_step(last, split);
    if (next == last) break;
    rows.push_back(std::move(next));
  }
  return rows;
}

std::uint64_t draw_rounds(std::uint64_t m, std::uint64_t cutoff,
                          const std::vector<std::vector<double>>& cdf, std::mt19937_64& rng) {
  if (m <= 1) return 0;
  if (m <= cutoff) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t t = 0; t < cdf.size(); ++t)
      if (u <= cdf[t][m]) return t;
    return cdf.size();
  }
  const std::uint64_t a = std::binomial_distribution<std::uint64_t>(m, 1.0 / 3.0)(rng);
  const std::uint64_t b = std::binomial_distribution<std::uint64_t>(m - a, 0.5)(rng);
  const std::uint64_t c = m - a - b;
  const std::uint64_t ra = draw_rounds(a, cutoff, cdf, rng);
  const std::uint64_t rb = draw_rounds(b, cutoff, cdf, rng);
  const std::uint64_t rc = draw_rounds(c, cutoff, cdf, rng);
  return 1 + std::max({ra, rb, rc});
}

Estimate ternary_with_cdf(std::uint64_t k, std::uint64_t trials, std::uint64_t seed,
                          std::uint64_t cutoff, const std::vector<std::vector<double>>& cdf) {
  const auto parts = run_chunks(trials, [&](std::uint64_t chunk, std::uint64_t count) {
    std::mt19937_64 rng(derive_seed(seed, k, chunk));
    Moments m;
    for (std::uint64_t t = 0; t < count; ++t) {
      const auto r = static_cast<double>(draw_rounds(k, cutoff, cdf, rng));
      m.sum += r;
      m.sum_sq += r * r;
    }
    return m;
  });
  return reduce(parts, trials);
}

}  // namespace

std::vector<std::vector<double>> ternary_round_cdf(std::uint64_t cutoff, std::uint64_t t_max) {
  if (cutoff > kTernaryExactLimit)
    fail(ErrorCode::InvalidConfig,
         "exact ternary distribution stops at k = " + std::to_string(kTernaryExactLimit));
  const SplitTable split = split_table(cutoff);
  std::vector<std::vector<double>> rows{cdf_start(cutoff)};
  for (std::uint64_t t = 1; t <= t_max; ++t) rows.push_back(cdf_step(rows.back(), split));
  return rows;
}

std::vector<double> ternary_exact_expectations(std::uint64_t cutoff) {
  if (cutoff > kTernaryExactLimit)
    fail(ErrorCode::InvalidConfig,
         "exact ternary distribution stops at k = " + std::to_string(kTernaryExactLimit));
  const auto rows = converged_cdf(cutoff);
  std::vector<double> e(cutoff + 1, 0.0);
  for (const auto& row : rows)
    for (std::size_t k = 0; k <= cutoff; ++k) e[k] += 1.0 - row[k];
  return e;
}

Estimate ternary_monte_carlo(std::uint64_t k, std::uint64_t trials, std::uint64_t seed,
                             std::uint64_t exact_cutoff) {
  if (trials == 0) fail(ErrorCode::InvalidConfig, "ternary Monte Carlo needs trials > 0");
  if (exact_cutoff > kTernaryExactLimit)
    fail(ErrorCode::InvalidConfig,
         "exact ternary distribution stops at k = " + std::to_string(kTernaryExactLimit));
  return ternary_with_cdf(k, trials, seed, exact_cutoff, converged_cdf(exact_cutoff));
}

SimulatedSequence ternary_split_sequence(const SimConfig& cfg) {
  check_sim_config(cfg, 1, kTernaryExactLimit, "ternary simulation");
  const std::uint64_t exact_to = std::min(cfg.exact_cutoff, cfg.max_n);
  const auto cdf = converged_cdf(cfg.exact_cutoff);
  const auto expect = ternary_exact_expectations(exact_to);

  std::vector<double> values;
  std::vector<double> se;
  std::vector<bool> exact;
  values.reserve(cfg.max_n);
  for (std::uint64_t k = 1; k <= cfg.max_n; ++k) {
    const double kk = static_cast<double>(k);
    if (k <= exact_to) {
      values.push_back(expect[k] / kk);
      se.push_back(0.0);
      exact.push_back(true);
    } else {
      const Estimate e = ternary_with_cdf(k, cfg.trials, cfg.seed, cfg.exact_cutoff, cdf);
      values.push_back(e.mean / kk);
      se.push_back(e.standard_error / kk);
      exact.push_back(false);
    }
  }
  return {SequenceSource::table(std::move(values), sim_label("ternary", cfg),
                                SourceKind::Stochastic),
          std::move(se), std::move(exact)};
}

}  // namespace rhostat
