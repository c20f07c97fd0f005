#include <doctest.h>

#include <cmath>
#include <random>

#include "rhostat/error.hpp"
#include "rhostat/funcanalysis.hpp"

using namespace rhostat;

namespace {

constexpr std::uint64_t kH = (std::uint64_t{1} << 16) + 1;

const Corpus& corpus() {
  static const Corpus c = [] {
    CorpusOptions o;
    o.horizon = kH;
    return make_default_corpus(o);
  }();
  return c;
}

const WeightSequence& rho() {
  static const WeightSequence w = WeightSequence::statistical(kH);
  return w;
}

const CorpusEntry& member(const std::string& label) {
  for (const auto& e : corpus())
    if (e.source.label() == label) return e;
  FAIL("no corpus member " << label);
  throw;
}

Corpus only(std::initializer_list<const char*> labels) {
  Corpus out;
  for (const char* l : labels) out.push_back(member(l));
  return out;
}

}  // namespace

TEST_CASE("translation changes no verdict") {
  auto r = test_downward_continuity(affine(1, 3.5), corpus(), rho());
  CHECK(r.summary == Preservation::Preserved);
  for (const auto& row : r.rows) {
    if (!row.image) continue;
    CHECK(row.image->outcome == row.input.outcome);
    for (std::size_t i = 0; i < row.input.evidence.size(); ++i)
      for (std::size_t j = 0; j < row.input.evidence[i].checkpoints.size(); ++j)
        CHECK(row.image->evidence[i].checkpoints[j].count ==
              row.input.evidence[i].checkpoints[j].count);
  }
  CHECK(test_ward_continuity(affine(1, -2), corpus(), rho()).summary == Preservation::Preserved);
}

TEST_CASE("negation is ward but not downward continuous") {
  auto f = parse_function("neg");
  auto down = test_downward_continuity(f, corpus(), rho());
  CHECK(down.summary == Preservation::Violated);
  REQUIRE(down.witness);
  CHECK(*down.witness == "neg");
  CHECK(test_ward_continuity(f, corpus(), rho()).summary == Preservation::Preserved);
}

TEST_CASE("squaring breaks -k") {
  auto r = test_downward_continuity(parse_function("square"), only({"neg", "const"}), rho());
  CHECK(r.summary == Preservation::Violated);
  REQUIRE(r.witness);
  CHECK(*r.witness == "neg");
}

TEST_CASE("a 2-Lipschitz map keeps quasi-Cauchy inputs") {
  auto f = piecewise_linear({{-1, -2}, {0, 0}, {1, 1}, {2, 3}}, "pwl");
  CHECK(*f.lipschitz == 2.0);
  auto r = test_ward_continuity(f, only({"const", "sqrt"}), rho());
  CHECK(r.summary == Preservation::Preserved);
}

TEST_CASE("piecewise-linear evaluation") {
  auto f = piecewise_linear({{0, 0}, {1, 2}, {3, 3}}, "p");
  CHECK(f(0.5) == 1.0);
  CHECK(f(2) == 2.5);
  CHECK(f(-1) == -2.0);
  CHECK(f(5) == 4.0);
  CHECK_THROWS_AS(piecewise_linear({{0, 0}, {0, 1}}, "dup"), Error);
}

TEST_CASE("domains are enforced") {
  auto sq = parse_function("square");
  auto root = RealFunction{[](double x) { return std::sqrt(x); }, "sqrt", 0.0, 1e300, std::nullopt};
  try {
    (void)apply(root, member("neg").source, 100);
    FAIL("expected domain violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainViolation);
  }
  CHECK_THROWS_AS(compose(root, parse_function("neg"))(2.0), Error);
  CHECK(compose(sq, parse_function("neg"))(3.0) == 9.0);
  CHECK_THROWS_AS(parse_function("nosuch"), Error);
}

TEST_CASE("identity closure: count of 2x at eps equals count of x at eps/2") {
  auto id = identity_function();
  auto r = closure_harness(id, id, corpus(), rho());
  CHECK(r.precondition_met);
  CHECK(r.sum.summary == Preservation::Preserved);
  CHECK(r.composition.summary == Preservation::Preserved);
  CHECK(r.sum_inequality.holds());
  CHECK(r.sum_inequality.comparisons > 0);

  const auto& s = member("alt").source;
  for (double eps : {1.0, 0.5, 0.1}) {
    auto grid = default_n_grid(kH - 1);
    auto twice = density_profile(apply(scale(2, id), s), rho(), eps, Predicate::Downward,
                                 std::nullopt, grid);
    auto half = density_profile(s, rho(), eps / 2, Predicate::Downward, std::nullopt, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(twice.checkpoints[i].count == half.checkpoints[i].count);
  }
}

TEST_CASE("shifted pair stays closed") {
  auto r = closure_harness(affine(1, 1), affine(1, 2), corpus(), rho());
  CHECK(r.f.summary == Preservation::Preserved);
  CHECK(r.g.summary == Preservation::Preserved);
  CHECK(r.sum_inequality.holds());
}

TEST_CASE("random monotone piecewise-linear pairs satisfy the sum inequality") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> slope(0.0, 3.0);
  auto random_pwl = [&](const char* name) {
    std::vector<std::pair<double, double>> knots;
    double y = 0;
    for (int i = 0; i < 6; ++i) {
      knots.emplace_back(-400.0 + 160.0 * i, y);
      y += 160.0 * slope(rng);
    }
    return piecewise_linear(knots, name);
  };
  for (int t = 0; t < 4; ++t) {
    auto c = sum_count_inequality(random_pwl("f"), random_pwl("g"), corpus(), rho());
    INFO(c.first_failure);
    CHECK(c.holds());
  }
}

TEST_CASE("chain check") {
  CHECK(chain_check(identity_function(), corpus(), rho()).consistent);
  auto affine_chain = chain_check(affine(2, 3), corpus(), rho());
  CHECK(affine_chain.downward.summary == Preservation::Preserved);
  CHECK(affine_chain.ward.summary == Preservation::Preserved);
  CHECK(affine_chain.deviation.summary != Preservation::Violated);
  CHECK(affine_chain.consistent);
  for (const auto& row : affine_chain.interleavings) {
    CHECK(row.interleaved.outcome != Outcome::Reject);
    CHECK(row.image.outcome != Outcome::Reject);
  }
  auto neg = chain_check(parse_function("neg"), corpus(), rho());
  CHECK(neg.downward.summary == Preservation::Violated);
  CHECK(neg.consistent);
}

TEST_CASE("image compactness") {
  std::vector<SequenceSource> samples;
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    samples.push_back(SequenceSource::stochastic(seed, [](std::uint64_t s) {
      std::mt19937_64 rng(s);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<double> v(2000);
      for (auto& x : v) x = u(rng);
      return v;
    }, "u" + std::to_string(seed)));
  auto shift = image_compactness_check(affine(1, 1), samples, corpus(), rho());
  CHECK_FALSE(shift.skipped);
  REQUIRE(shift.rows.size() == 3);
  for (const auto& row : shift.rows) CHECK(row.image.outcome == Outcome::Accept);
  auto bounded = image_compactness_check(parse_function("atan"), samples, corpus(), rho());
  for (const auto& row : bounded.rows) CHECK(row.image.outcome != Outcome::Reject);
  auto neg = image_compactness_check(parse_function("neg"), samples, corpus(), rho());
  CHECK(neg.skipped);
  CHECK(neg.rows.empty());
}

TEST_CASE("uniform continuity falsifier") {
  auto w = WeightSequence::statistical(1 << 14);
  FalsifyConfig cfg;
  auto sq = falsify_uniform_continuity(parse_function("square"), {0.0, 1e6}, w, cfg);
  REQUIRE(sq);
  CHECK(sq->eps0 == 1.0);
  for (std::size_t n = 1; n <= sq->alpha.size(); ++n) {
    CHECK(std::fabs(sq->alpha[n - 1] - sq->beta[n - 1]) < 1.0 / double(n));
    CHECK(sq->alpha[n - 1] * sq->alpha[n - 1] - sq->beta[n - 1] * sq->beta[n - 1] >= 1.0);
  }
  CHECK(sq->input.outcome == Outcome::Accept);
  CHECK(sq->image.outcome == Outcome::Reject);
  CHECK_FALSE(falsify_uniform_continuity(identity_function(), {-1e6, 1e6}, w, cfg));
  CHECK_FALSE(falsify_uniform_continuity(parse_function("sin"), {-1e6, 1e6}, w, cfg));
}

TEST_CASE("uc image bound") {
  const std::uint64_t h = (std::uint64_t{1} << 20) + 1;
  auto w = WeightSequence::statistical(h);
  std::vector<SequenceSource> qc{SequenceSource::closed_form("sqrt(k)", h, "sqrt")};
  auto half = uc_image_check(scale(0.5, identity_function()), qc, w);
  CHECK(half.bound_checked);
  CHECK(half.passed());
  REQUIRE(half.rows.size() == 1);
  for (const auto& b : half.rows[0].bounds) {
    CHECK(b.delta == doctest::Approx(2 * b.epsilon));
    CHECK(b.check.holds());
    CHECK(b.k0 == quasi_cauchy_tail_index(qc[0], b.delta, h - 1));
  }
  CHECK(uc_image_check(parse_function("abs"), qc, w).passed());
  auto c = uc_image_check(constant_function(4), qc, w);
  for (const auto& p : c.rows[0].image->evidence)
    for (const auto& cp : p.checkpoints) CHECK(cp.count == 0);
}

TEST_CASE("uniform limits") {
  auto shift = uniform_limit_check(shift_family(), corpus(), rho());
  CHECK(shift.passed());
  for (const auto& row : shift.rows) {
    CHECK(row.error < row.epsilon / 3);
    CHECK(row.inequality.holds());
  }
  CHECK(shift.limit.summary == Preservation::Preserved);

  CorpusOptions o;
  o.horizon = 4097;
  auto bounded = make_default_corpus(o);
  std::erase_if(bounded, [](const CorpusEntry& e) {
    auto x = kernels::extent(e.source.prefix(e.source.horizon()).values);
    return x.min < 0.0 || x.max > 1.0;
  });
  auto w = WeightSequence::statistical(4097);
  CHECK(uniform_limit_check(bernstein_family(parse_function("sin"), 1.0), bounded, w).passed());
  CHECK(uniform_limit_check(clipped_square_family(1.0), bounded, w).passed());
}
