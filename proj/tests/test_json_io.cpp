#include <gtest/gtest.h>

#include "rccs/json_io.hpp"
#include "test_support.hpp"

namespace rccs {
namespace {

using io::json;
using testing::q;

const char* kS4 = R"({
  "atoms": [{"label": "w1", "weight": "3/8"}, {"label": "w2", "weight": "1/8"},
            {"label": "w3", "weight": "1/8"}, {"label": "w4", "weight": "3/8"}],
  "events": {"A": ["w1", "w2"], "B": ["w1", "w3"], "C": ["w1", "w4"]}
})";

ErrorCode parse_error(const std::string& text) {
  try {
    io::space_from_json(json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::InvalidArgument;
}

TEST(SpaceJsonTest, ParsesDocument) {
  const auto doc = io::space_from_json(json::parse(kS4));
  testing::S4 s4;
  EXPECT_EQ(doc.space.size(), 4u);
  EXPECT_EQ(doc.space.weight(0), q(3, 8));
  EXPECT_EQ(correlation_summary(doc.space, doc.event("A"), doc.event("B")),
            correlation_summary(s4.space, s4.A, s4.B));
  EXPECT_EQ(doc.event("C").count(), 2u);
  EXPECT_THROW(doc.event("Z"), Error);
}

TEST(SpaceJsonTest, RejectsBadInput) {
  EXPECT_EQ(parse_error(R"({"atoms":[{"label":"x","weight":"3/0"}]})"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error(R"({"atoms":[{"label":"x","weight":1.0}]})"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error(R"({"atoms":[{"label":"x","weight":"0.5"},{"label":"y","weight":"1/2"}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_error(R"({"atoms":[{"label":"x","weight":"1/2"},{"label":"y","weight":"1/3"}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_error(R"({"atoms":[{"label":"x","weight":"1"}],"events":{"A":["y"]}})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_error(R"({"atom":[]})"), ErrorCode::ParseError);
}

TEST(SpaceJsonTest, RoundTrip) {
  const auto doc = io::space_from_json(json::parse(kS4));
  const auto again = io::space_from_json(io::space_to_json(doc.space, doc.events));
  EXPECT_EQ(again.space.atoms().size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(again.space.atom(i).weight, doc.space.atom(i).weight);
  EXPECT_EQ(again.event("B").labels(), doc.event("B").labels());
}

TEST(AdmissibleJsonTest, RoundTrip) {
  const auto set = testing::s4_reference_set();
  const json j = io::to_json(set);
  EXPECT_EQ(j["d"][1], "35/48");
  EXPECT_EQ(io::admissible_star_from_json(j), set);
  json bad = j;
  bad["n"] = 3;
  EXPECT_THROW(io::admissible_star_from_json(bad), Error);
}

TEST(RequestJsonTest, Defaults) {
  const auto req = io::request_from_json(json::parse(R"({"target":{"a":"1/2","b":"1/2","pAB":"3/8"},"n":4})"));
  EXPECT_EQ(req.n, 4u);
  EXPECT_EQ(req.mode, ConstructionMode::Realizable);
  EXPECT_EQ(req.schedule.epsilon, q(1, 64));
  EXPECT_EQ(req.schedule.shrink, q(1, 2));
  EXPECT_EQ(req.schedule.max_retries, 64);
  const auto back = io::request_from_json(io::to_json(req));
  EXPECT_EQ(back.target, req.target);
  EXPECT_THROW(io::request_from_json(json::parse(R"({"target":{"a":"1/2","b":"1/2","pAB":"3/8"},"n":4,"mode":"x"})")),
               Error);
  EXPECT_THROW(io::request_from_json(json::parse(R"({"target":{"a":"1/2","b":"1/2","pAB":"9/10"},"n":2})")),
               Error);
}

TEST(ExtensionJsonTest, ReparsesAsRccs) {
  testing::S4 s4;
  const auto ext = extend_with_rccs(s4.space, s4.A, s4.B, testing::s4_reference_set());
  const json j = io::extension_to_json(ext, s4.space, {{"A", s4.A}, {"B", s4.B}});
  EXPECT_EQ(j["parent_of"]["w3#2"], "w3");
  EXPECT_EQ(j["weights"]["AB"][0], "1/36");
  const auto doc = io::space_from_json(j);
  std::vector<Event> cells;
  for (const auto& name : j["partition"]) cells.push_back(doc.event(name.get<std::string>()));
  const auto p = validate_partition(doc.space, cells);
  EXPECT_TRUE(verify_rccs(doc.space, doc.event("A"), doc.event("B"), p).verdict);
}

}  // namespace
}  // namespace rccs
