#include <doctest.h>

#include "rhostat/classify.hpp"
#include "rhostat/error.hpp"

using namespace rhostat;

namespace {

constexpr std::uint64_t kH = 100001;

Outcome outcome(const char* expr, ClassTag tag, std::uint64_t h = kH) {
  return classify(SequenceSource::closed_form(expr, h), WeightSequence::statistical(h), tag).outcome;
}

Outcome outcome(const char* expr, ClassKind kind) { return outcome(expr, ClassTag::of(kind)); }

}  // namespace

TEST_CASE("-k is downward but not pointwise quasi-Cauchy") {
  CHECK(outcome("-k", ClassKind::RhoStatDownwardQuasiCauchy) == Outcome::Accept);
  CHECK(outcome("-k", ClassKind::QuasiCauchy) == Outcome::Reject);
  CHECK(outcome("-k", ClassKind::RhoStatQuasiCauchy) == Outcome::Reject);
  CHECK(outcome("-k", ClassKind::DownwardHalfCauchy) == Outcome::Accept);
  CHECK(outcome("-k", ClassKind::DownwardQuasiCauchy) == Outcome::Accept);
}

TEST_CASE("sqrt k is quasi-Cauchy") {
  CHECK(outcome("sqrt(k)", ClassKind::QuasiCauchy) == Outcome::Accept);
  CHECK(outcome("sqrt(k)", ClassKind::DownwardHalfCauchy) == Outcome::Reject);
  // With the full default epsilon grid, 0.01 sees about 2500 big steps in 10^5.
  auto v = classify(SequenceSource::closed_form("sqrt(k)", kH), WeightSequence::statistical(kH),
                    ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy));
  CHECK(v.outcome == Outcome::Inconclusive);
  CHECK(v.evidence.back().epsilon == 0.01);
  CHECK(v.evidence.back().final_density() == doctest::Approx(0.02499).epsilon(1e-3));
  ClassifyConfig coarse;
  coarse.eps_grid = {0.5, 0.1};
  CHECK(classify(SequenceSource::closed_form("sqrt(k)", kH), WeightSequence::statistical(kH),
                 ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy), coarse)
            .outcome == Outcome::Accept);
}

TEST_CASE("(-1)^k and k reject") {
  auto v = classify(SequenceSource::closed_form("(-1)^k", kH), WeightSequence::statistical(kH),
                    ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy));
  CHECK(v.outcome == Outcome::Reject);
  CHECK(v.evidence.front().epsilon == 1.0);
  CHECK(v.evidence.front().final_density() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(outcome("k", ClassKind::RhoStatDownwardQuasiCauchy) == Outcome::Reject);
  CHECK(outcome("k", ClassKind::QuasiCauchy) == Outcome::Reject);
}

TEST_CASE("convergence to a level") {
  CHECK(outcome("1 + 1/k", ClassTag::convergent(1.0)) == Outcome::Accept);
  CHECK(outcome("1 + 1/k", ClassTag::convergent(2.0)) == Outcome::Reject);
  CHECK(outcome("(-1)^k", ClassTag::convergent(0.0)) == Outcome::Reject);
  CHECK(estimate_level(SequenceSource::closed_form("3 + 1/k", kH)) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("lacunary downward class") {
  CHECK(outcome("-k", ClassTag::lacunary(default_theta(kH - 1))) == Outcome::Accept);
  CHECK(outcome("(-1)^k", ClassTag::lacunary(default_theta(kH - 1))) == Outcome::Reject);
}

TEST_CASE("class tags validate their parameters") {
  CHECK_THROWS_AS(classify(SequenceSource::constant(0, 100), WeightSequence::statistical(100),
                           ClassTag::of(ClassKind::RhoStatConvergent)),
                  Error);
  CHECK(parse_class_kind("rho-downward") == ClassKind::RhoStatDownwardQuasiCauchy);
  CHECK(std::string(cli_name(ClassKind::DownwardHalfCauchy)) == "half-cauchy");
  CHECK_THROWS_AS(parse_class_kind("nope"), Error);
}

TEST_CASE("pointwise classes need a long enough prefix") {
  CHECK_THROWS_AS(classify(SequenceSource::constant(0, 10), WeightSequence::statistical(10),
                           ClassTag::of(ClassKind::QuasiCauchy)),
                  Error);
}

TEST_CASE("faster weights make -k and k behave the same way") {
  auto w = make_weights("expr:n^1.5", kH);
  CHECK(classify(SequenceSource::closed_form("-k", kH), w,
                 ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy))
            .outcome == Outcome::Accept);
  // count n over rho_n = n^1.5 decays, so with rho_n = n^1.5 even k is accepted
  auto v = classify(SequenceSource::closed_form("k", kH), w,
                    ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy));
  CHECK(v.outcome == Outcome::Accept);
}

TEST_CASE("implication report") {
  auto w = WeightSequence::statistical(kH);
  auto c = implication_report(SequenceSource::constant(2, kH), w);
  CHECK(c.anomalies.empty());
  for (const auto& row : c.rows) CHECK(row.verdict.outcome == Outcome::Accept);

  auto neg = implication_report(SequenceSource::closed_form("-k", kH), w);
  CHECK(neg.anomalies.empty());
  CHECK(neg.verdict(ClassKind::RhoStatQuasiCauchy).outcome == Outcome::Reject);
  CHECK(neg.verdict(ClassKind::RhoStatDownwardQuasiCauchy).outcome == Outcome::Accept);

  auto pos = implication_report(SequenceSource::closed_form("k", kH), w);
  CHECK(pos.anomalies.empty());
  for (const auto& row : pos.rows)
    if (row.tag.kind != ClassKind::RhoStatConvergent) CHECK(row.verdict.outcome == Outcome::Reject);
  CHECK(!known_implications().empty());
}
