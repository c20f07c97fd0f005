#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "rhostat/error.hpp"
#include "rhostat/io.hpp"

using namespace rhostat;

TEST_CASE("value columns") {
  std::istringstream in("# header\n1.5\n\n-2\n3e2\n");
  CHECK(parse_value_column(in, "mem") == std::vector<double>{1.5, -2, 300});
  std::istringstream bad("1\nx\n");
  try {
    (void)parse_value_column(bad, "mem");
    FAIL("expected parse error");
  } catch (const IndexedError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.index() == 2);
  }
}

TEST_CASE("sequence JSON round trip keeps every bit") {
  auto s = SequenceSource::table({0.1, 1.0 / 3.0, -2e-300, 1e300}, "t");
  auto back = sequence_from_json(json::parse(sequence_to_json(s).dump()));
  CHECK(back.label() == "t");
  REQUIRE(back.horizon() == 4);
  CHECK(eval_prefix(back, 4) == eval_prefix(s, 4));
  CHECK_THROWS_AS(sequence_from_json(json::parse(R"({"values": "x"})")), Error);
  CHECK_THROWS_AS(sequence_from_json(json::parse(R"({"label": "i", "values": [1, "inf"]})")), Error);
}

TEST_CASE("sequence specs") {
  auto e = parse_sequence_spec("expr:k^2", 10, 1);
  CHECK(e.horizon() == 10);
  CHECK(e.at(3) == 9.0);
  CHECK(parse_sequence_spec("builtin:neg", 10, 1).at(4) == -4.0);
  {
    std::ofstream f("io_seq.csv");
    f << "4\n5\n6\n";
  }
  auto t = parse_sequence_spec("csv:io_seq.csv", 100, 1);
  CHECK(eval_prefix(t, 3) == std::vector<double>{4, 5, 6});
  CHECK_THROWS_AS(parse_sequence_spec("what:ever", 10, 1), Error);
  CHECK_THROWS_AS(parse_sequence_spec("table:/no/such/file", 10, 1), Error);
}

TEST_CASE("profiles export and re-import") {
  auto w = WeightSequence::statistical(1000);
  const std::vector<std::uint64_t> grid{10, 100, 999};
  auto p = density_profile(SequenceSource::closed_form("sqrt(k)", 1000), w, 0.1,
                           Predicate::Downward, std::nullopt, grid);
  auto back = profile_from_json(to_json(p));
  CHECK(back.epsilon == p.epsilon);
  REQUIRE(back.checkpoints.size() == 3);
  CHECK(back.checkpoints[1].count == p.checkpoints[1].count);
  json doc{{"results", json::array({{{"evidence", json::array({to_json(p)})}}})}};
  CHECK(profiles_in(doc).size() == 1);
  std::ostringstream csv;
  write_profiles_csv(csv, {p});
  std::string header;
  std::istringstream lines(csv.str());
  std::getline(lines, header);
  CHECK(header == "eps,n,density");
  int rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("corrupt JSON is an error") {
  {
    std::ofstream f("io_bad.json");
    f << "{\"profiles\": [1, 2";
  }
  try {
    (void)read_json_file("io_bad.json");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("verdict JSON carries evidence") {
  auto w = WeightSequence::statistical(1000);
  auto v = classify(SequenceSource::closed_form("k", 1000), w,
                    ClassTag::of(ClassKind::RhoStatDownwardQuasiCauchy));
  auto j = to_json(v);
  CHECK(j["outcome"] == "Reject");
  CHECK(j["evidence"].size() == default_eps_grid().size());
}
