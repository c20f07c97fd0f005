#include <doctest.h>

#include <cmath>

#include "rhostat/error.hpp"
#include "rhostat/weights.hpp"

using namespace rhostat;

TEST_CASE("statistical weights are the identity") {
  auto w = make_weights("statistical", 100);
  CHECK(w.at(5) == 5.0);
  CHECK(w.at(100) == 100.0);
  CHECK(w.kind() == WeightKind::Statistical);
  CHECK_THROWS_AS(w.at(101), Error);
}

TEST_CASE("closed form with a pinned first term") {
  auto w = make_weights("expr:n + 1/n;1=1", 10);
  CHECK(w.at(1) == 1.0);
  CHECK(w.at(2) == doctest::Approx(2.5));
  CHECK(w.at(4) == doctest::Approx(4.25));
}

TEST_CASE("table weights must stay positive") {
  auto w = WeightSequence::table({1, 1, 2, 3}, "t");
  CHECK(w.horizon() == 4);
  CHECK(w.at(3) == 2.0);
  try {
    (void)WeightSequence::table({1, 0.5, 2}, "bad");
    FAIL("expected an error");
  } catch (const IndexedError& e) {
    CHECK(e.code() == ErrorCode::InvalidWeights);
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(WeightSequence::table({1, -1}, "neg"), IndexedError);
  CHECK_THROWS_AS(WeightSequence::table({}, "empty"), Error);
}

TEST_CASE("weight spec parsing") {
  auto s = parse_weight_spec("expr:n^2;1=2;3=9");
  CHECK(s.kind == WeightKind::ClosedForm);
  CHECK(s.expression == "n^2");
  CHECK(s.overrides.size() == 2);
  CHECK(s.overrides.at(1) == 2.0);
  CHECK_THROWS_AS(parse_weight_spec("bogus"), Error);
}

TEST_CASE("conditions for rho_n = n hold") {
  auto w = make_weights("statistical", 1001);
  auto r = check_conditions(w, 1000);
  CHECK(r.all_passed());
  CHECK(r.ratio_bounded.observed == doctest::Approx(1.0));
  CHECK(r.increment_bounded.observed == doctest::Approx(1.0));
}

TEST_CASE("rho_n = n^2 breaks the ratio bound at n = 11") {
  auto w = make_weights("expr:n^2", 1001);
  auto r = check_conditions(w, 1000);
  CHECK(r.non_decreasing.passed);
  CHECK(r.divergent.passed);
  CHECK_FALSE(r.ratio_bounded.passed);
  REQUIRE(r.ratio_bounded.witness);
  CHECK(*r.ratio_bounded.witness == 11);
  CHECK_FALSE(r.increment_bounded.passed);
}

TEST_CASE("rho_n = n + 1/n passes; its largest increment is the first") {
  auto w = make_weights("expr:n + 1/n;1=1", 1001);
  auto r = check_conditions(w, 1000);
  CHECK(r.all_passed());
  CHECK(r.increment_bounded.observed == doctest::Approx(1.5));
}

TEST_CASE("a bounded weight fails the divergence proxy") {
  auto w = make_weights("expr:2 - 1/n", 1001);
  auto r = check_conditions(w, 1000);
  CHECK(r.non_decreasing.passed);
  CHECK_FALSE(r.divergent.passed);
}

TEST_CASE("horizon beyond the weights is an error") {
  auto w = make_weights("statistical", 10);
  CHECK_THROWS_AS(check_conditions(w, 10), Error);
}
