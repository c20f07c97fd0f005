#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "rhostat/simulate.hpp"

using namespace rhostat;

namespace {

// Survivor probability by brute force: every selection pattern, with the
// probability for the people nobody selected looked up from smaller n.
double pairing_oracle(int n) {
  static std::vector<double> memo{0.0, 1.0};
  while (int(memo.size()) <= n) {
    const int m = int(memo.size());
    std::vector<int> pick(m, 0);
    double total = 0;
    long patterns = 0;
    std::function<void(int)> rec = [&](int i) {
      if (i == m) {
        std::vector<bool> chosen(m, false);
        for (int p = 0; p < m; ++p) chosen[pick[p]] = true;
        int left = 0;
        for (bool c : chosen) left += !c;
        total += memo[left];
        ++patterns;
        return;
      }
      for (int t = 0; t < m; ++t) {
        if (t == i) continue;
        pick[i] = t;
        rec(i + 1);
      }
    };
    rec(0);
    memo.push_back(total / double(patterns));
  }
  return memo[n];
}

// E[T_k] for the ternary process via P(T_k <= t), split by split.
double ternary_oracle(int k) {
  const int tmax = 400;
  std::vector<std::vector<double>> cdf(k + 1, std::vector<double>(tmax + 1, 0.0));
  auto choose = [](int n, int r) { return std::tgamma(n + 1.0) / (std::tgamma(r + 1.0) * std::tgamma(n - r + 1.0)); };
  for (int t = 0; t <= tmax; ++t) {
    cdf[0][t] = cdf[1][t] = 1.0;
    for (int m = 2; m <= k; ++m) {
      if (t == 0) continue;
      double p = 0;
      for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b) {
          int c = m - a - b;
          double w = choose(m, a) * choose(m - a, b) * std::pow(3.0, -m);
          auto f = [&](int g) { return g <= 1 ? 1.0 : cdf[g][t - 1]; };
          p += w * f(a) * f(b) * f(c);
        }
      cdf[m][t] = p;
    }
  }
  double e = 0;
  for (int t = 0; t < tmax; ++t) e += 1.0 - cdf[k][t];
  return e;
}

}  // namespace

TEST_CASE("pairing exact values") {
  auto v = pairing_exact_values(8);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.0);
  for (int n = 3; n <= 7; ++n) {
    INFO("n=", n);
    CHECK(v[n] == doctest::Approx(pairing_oracle(n)).epsilon(1e-12));
  }
  for (double x : v) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  auto d = pairing_survivor_distribution(3);
  double s = 0;
  for (double p : d) s += p;
  CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("pairing Monte Carlo agrees with enumeration") {
  auto exact = pairing_exact_values(8);
  for (std::uint64_t n = 3; n <= 8; ++n) {
    std::vector<double> lower(exact.begin(), exact.begin() + n);
    auto est = pairing_monte_carlo(n, lower, 20000, 9);
    INFO("n=", n, " mean=", est.mean, " se=", est.standard_error);
    CHECK(std::fabs(est.mean - exact[n]) <= 4 * est.standard_error + 1e-12);
  }
}

TEST_CASE("pairing sequence") {
  SimConfig cfg;
  cfg.max_n = 24;
  cfg.trials = 2000;
  auto s = pairing_survivor_sequence(cfg);
  CHECK(s.source.horizon() == 24);
  CHECK(s.source.at(1) == 1.0);
  CHECK(s.source.at(2) == 0.0);
  CHECK(s.exact[7]);
  CHECK_FALSE(s.exact[23]);
  CHECK(s.standard_error[0] == 0.0);
  CHECK(s.standard_error[23] > 0.0);
  auto again = pairing_survivor_sequence(cfg);
  CHECK(eval_prefix(s.source, 24) == eval_prefix(again.source, 24));
}

TEST_CASE("ternary exact expectations") {
  auto e = ternary_exact_expectations(12);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);
  CHECK(e[2] == doctest::Approx(1.5));
  for (int k = 3; k <= 8; ++k) {
    INFO("k=", k);
    CHECK(e[k] == doctest::Approx(ternary_oracle(k)).epsilon(1e-9));
  }
  for (std::size_t k = 1; k < e.size(); ++k) {
    CHECK(e[k] >= 0.0);
    CHECK(e[k] >= e[k - 1]);
  }
}

TEST_CASE("ternary Monte Carlo agrees with the exact values") {
  auto e = ternary_exact_expectations(40);
  for (std::uint64_t k : {10u, 25u, 40u}) {
    auto est = ternary_monte_carlo(k, 20000, 4, 8);
    INFO("k=", k, " mean=", est.mean, " se=", est.standard_error);
    CHECK(std::fabs(est.mean - e[k]) <= 4 * est.standard_error);
  }
}

TEST_CASE("ternary normalized sequence") {
  SimConfig cfg;
  cfg.max_n = 40;
  cfg.exact_cutoff = 16;
  cfg.trials = 2000;
  auto s = ternary_split_sequence(cfg);
  CHECK(s.source.at(1) == 0.0);
  CHECK(s.source.at(2) == doctest::Approx(0.75));
  CHECK(s.exact[15]);
  CHECK_FALSE(s.exact[39]);
  for (std::uint64_t k = 1; k <= 40; ++k) {
    CHECK(s.source.at(k) >= 0.0);
    CHECK(s.source.at(k) <= 1.0);
  }
}

TEST_CASE("derived seeds differ by stream and chunk") {
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}
