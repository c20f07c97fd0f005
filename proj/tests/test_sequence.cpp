#include <doctest.h>

#include <cmath>
#include <vector>

#include "rhostat/error.hpp"
#include "rhostat/sequence.hpp"

using namespace rhostat;

namespace {

std::vector<double> first(const SequenceSource& s, std::uint64_t n) { return eval_prefix(s, n); }

}  // namespace

TEST_CASE("eval_prefix") {
  CHECK(first(SequenceSource::constant(3, 10), 4) == std::vector<double>{3, 3, 3, 3});
  auto r = first(SequenceSource::closed_form("sqrt(k)", 10), 3);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == doctest::Approx(1.41421356));
  CHECK(r[2] == doctest::Approx(1.73205081));
  try {
    (void)first(SequenceSource::table({5, 1}, "t"), 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HorizonExceeded);
  }
}

TEST_CASE("closed forms evaluate bit-identically twice") {
  auto s = SequenceSource::closed_form("sin(k) / log(k + 1)", 1000);
  CHECK(first(s, 1000) == first(s, 1000));
  auto r = SequenceSource::stochastic(7, [](std::uint64_t) {
    return std::vector<double>{0.25, 0.5};
  }, "r");
  CHECK(r.at(2) == 0.5);
}

TEST_CASE("difference") {
  CHECK(first(difference(SequenceSource::closed_form("k", 10)), 3) == std::vector<double>{1, 1, 1});
  CHECK(first(difference(SequenceSource::closed_form("-k", 10)), 3) ==
        std::vector<double>{-1, -1, -1});
  CHECK(first(difference(SequenceSource::closed_form("(-1)^k", 10)), 3) ==
        std::vector<double>{2, -2, 2});
  CHECK(difference(SequenceSource::constant(1, 10)).horizon() == 9);
}

TEST_CASE("zigzag interleave visits each adjacent pair both ways") {
  auto z = zigzag_interleave(SequenceSource::closed_form("k", 10));
  CHECK(first(z, 7) == std::vector<double>{1, 2, 1, 2, 3, 2, 3});
  CHECK(z.horizon() == 28);
  CHECK(first(zigzag_interleave(SequenceSource::constant(4, 5)), 13) ==
        std::vector<double>(13, 4.0));
  auto ab = zigzag_interleave(SequenceSource::table({7, 9}, "ab"));
  CHECK(first(ab, ab.horizon()) == std::vector<double>{7, 9, 7, 9});
}

TEST_CASE("limit interleave") {
  CHECK(first(limit_interleave(SequenceSource::table({7}, "s"), 0), 4) ==
        std::vector<double>{7, 0, 7, 0});
  CHECK(first(limit_interleave(SequenceSource::table({1, 2}, "s"), 5), 8) ==
        std::vector<double>{1, 5, 1, 5, 2, 5, 2, 5});
  CHECK(first(limit_interleave(SequenceSource::constant(2, 3), 2), 12) ==
        std::vector<double>(12, 2.0));
}

TEST_CASE("pair interleave") {
  auto b = SequenceSource::table({1, 2}, "b");
  auto a = SequenceSource::table({10, 20}, "a");
  CHECK(first(pair_interleave(b, a), 4) == std::vector<double>{1, 10, 2, 20});
  CHECK(first(pair_interleave(a, a), 4) == std::vector<double>{10, 10, 20, 20});
  CHECK(first(pair_interleave(SequenceSource::table({0, 0}, "z"), SequenceSource::table({1, 1}, "o")),
              4) == std::vector<double>{0, 1, 0, 1});
  CHECK_THROWS_AS(pair_interleave(b, SequenceSource::constant(1, 5)), Error);
}

TEST_CASE("take_subsequence") {
  auto k = SequenceSource::closed_form("k", 10);
  CHECK(first(take_subsequence(k, IndexSubsequence({2, 4, 6})), 3) == std::vector<double>{2, 4, 6});
  auto one = take_subsequence(k, IndexSubsequence({1}));
  CHECK(one.horizon() == 1);
  CHECK(one.at(1) == 1.0);
  try {
    IndexSubsequence({3, 2});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSubsequence);
  }
  CHECK_THROWS_AS(IndexSubsequence({0, 1}), Error);
  CHECK_THROWS_AS(take_subsequence(k, IndexSubsequence({11})), Error);
}

TEST_CASE("subsequence composition") {
  IndexSubsequence outer({2, 4, 6, 8});
  CHECK(outer.compose(IndexSubsequence({1, 3})) == IndexSubsequence({2, 6}));
}

TEST_CASE("recurrence and map_values") {
  auto fib = SequenceSource::recurrence({1, 1}, [](std::uint64_t, std::span<const double> p) {
    return p[p.size() - 1] + p[p.size() - 2];
  }, 8, "fib");
  CHECK(first(fib, 8) == std::vector<double>{1, 1, 2, 3, 5, 8, 13, 21});
  auto sq = map_values(SequenceSource::closed_form("k", 4), [](double x) { return x * x; }, "sq");
  CHECK(first(sq, 4) == std::vector<double>{1, 4, 9, 16});
  CHECK(materialize(sq).stored());
}

TEST_CASE("non-finite table values are rejected") {
  CHECK_THROWS_AS(SequenceSource::table({1, NAN}, "nan"), Error);
}
