#include <doctest.h>

#include <cmath>
#include <random>

#include "rhostat/compactness.hpp"
#include "rhostat/error.hpp"

using namespace rhostat;

namespace {

SequenceSource uniform_sample(std::uint64_t n, std::uint64_t seed) {
  return SequenceSource::stochastic(seed, [n](std::uint64_t s) {
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
  }, "uniform");
}

// Length of the longest non-increasing subsequence, O(n^2).
std::size_t lnis_length(const std::vector<double>& v) {
  std::vector<std::size_t> best(v.size(), 1);
  std::size_t out = v.empty() ? 0 : 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (v[j] >= v[i]) best[i] = std::max(best[i], best[j] + 1);
    out = std::max(out, best[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("bounded_above_check") {
  auto a = bounded_above_check({{1, 2, 3}, "small", std::nullopt}, 10);
  CHECK(a.bounded);
  CHECK(a.sup == 3.0);
  std::vector<double> k(100);
  for (int i = 0; i < 100; ++i) k[i] = i + 1;
  auto b = bounded_above_check({k, "k", std::nullopt}, 10);
  CHECK_FALSE(b.bounded);
  CHECK(b.sup == 100.0);
  std::vector<double> pow2;
  for (int i = 1; i <= 40; ++i) pow2.push_back(-std::ldexp(1.0, i));
  auto c = bounded_above_check({pow2, "-2^k", std::nullopt}, 10);
  CHECK(c.bounded);
  CHECK(c.sup == -2.0);
  CHECK_THROWS_AS(bounded_above_check({{}, "empty", std::nullopt}, 1), Error);
}

TEST_CASE("monotone_indices finds a longest non-increasing subsequence") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(0, 20);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(300);
    for (auto& x : v) x = d(rng);
    auto idx = monotone_indices(v);
    CHECK(idx.size() == lnis_length(v));
    for (std::size_t i = 1; i < idx.size(); ++i) {
      CHECK(idx[i] > idx[i - 1]);
      CHECK(v[idx[i] - 1] <= v[idx[i - 1] - 1]);
    }
  }
  CHECK(monotone_indices(std::vector<double>{1, 2, 3}).size() == 1);
  CHECK(monotone_indices(std::vector<double>{3, 3, 1}) == std::vector<std::uint64_t>{1, 2, 3});
}

TEST_CASE("uniform [0,1] samples yield a verified downward witness") {
  auto w = WeightSequence::statistical(1 << 17);
  auto wit = extract_downward_witness(uniform_sample(1000, 5), w);
  CHECK(wit.kind == WitnessKind::DownwardSubsequence);
  CHECK(wit.method == ExtractionMethod::MonotoneBounded);
  CHECK(wit.values.size() >= 16);
  CHECK(wit.verification.outcome == Outcome::Accept);
  for (std::size_t i = 1; i < wit.values.size(); ++i) CHECK(wit.values[i] <= wit.values[i - 1]);
}

TEST_CASE("the descent construction is its own steep-descent witness") {
  auto w = WeightSequence::statistical(4096);
  auto seq = construct_descent_sequence(w, 512);
  auto wit = extract_downward_witness(seq, w);
  CHECK(wit.method == ExtractionMethod::SteepDescent);
  REQUIRE(wit.indices.size() == 512);
  for (std::size_t k = 1; k <= 512; ++k) CHECK(wit.indices.at(k) == k);
  for (std::size_t k = 1; k < wit.values.size(); ++k)
    CHECK(wit.values[k] < wit.values[k - 1] - w.at(k + 1));
  CHECK(wit.verification.outcome == Outcome::Accept);
}

TEST_CASE("k has no downward witness") {
  auto w = WeightSequence::statistical(4096);
  try {
    (void)extract_downward_witness(SequenceSource::closed_form("k", 1000), w);
    FAIL("expected no-witness");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoWitness);
  }
}

TEST_CASE("escaping construction") {
  auto w = WeightSequence::statistical(1000);
  CHECK(eval_prefix(construct_escaping_sequence(0, w, 4), 4) == std::vector<double>{0, 2, 5, 9});
  CHECK(eval_prefix(construct_escaping_sequence(0, w, 2), 2) == std::vector<double>{0, w.at(1) + 1});
  auto wit = escaping_witness(0, w, 1000);
  CHECK(wit.kind == WitnessKind::DivergingConstruction);
  CHECK(wit.verification.outcome == Outcome::Reject);
  CHECK(wit.verification.evidence.front().epsilon == 1.0);
  CHECK(wit.verification.evidence.front().final_density() >= 0.9);
}
