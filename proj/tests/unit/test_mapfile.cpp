#include <gtest/gtest.h>

#include "bimero/corpus.hpp"
#include "bimero/error.hpp"
#include "bimero/mapfile.hpp"

using namespace bimero;

namespace {

const std::string kDir = BIMERO_MAP_DIR;

ParseError parse_failure(const std::string& text) {
  try {
    parse_map_file(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError(0, 0, "");
}

const char* kSmall = R"({
  "name": "t",
  "degree": 1,
  "forward": [
    [[1, 0, 0, 1, 1, 0, 1]],
    [[0, 1, 0, 1, 1, 0, 1]],
    [[0, 0, 1, 1, 1, 0, 1]]
  ]
})";

}  // namespace

TEST(MapFile, BundledMapsMatchCorpus) {
  for (const auto& f : {corpus::cremona(), corpus::henon(), corpus::linear(), corpus::lsigma()}) {
    const auto file = load_map_file(kDir + "/" + f.name() + ".map");
    EXPECT_EQ(file.name, f.name());
    EXPECT_EQ(file.degree, f.degree());
    EXPECT_EQ(file.forward, f.forward());
    EXPECT_EQ(file.inverse, f.inverse());
    EXPECT_TRUE(verify_inverse(file.to_map()));
  }
}

TEST(MapFile, HenonInspection) {
  const auto h = load_map_file(kDir + "/henon.map").to_map();
  EXPECT_EQ(h.degree(), 2);
  ASSERT_EQ(h.indeterminacy().size(), 1u);
  EXPECT_LT(proj_distance(h.indeterminacy()[0].point, ProjectivePoint(1, 0, 0)), 1e-15);
  EXPECT_EQ(indeterminacy_set(load_map_file(kDir + "/cremona.map").forward).size(), 3u);
}

TEST(MapFile, LatticeSection) {
  const auto file = load_map_file(kDir + "/henon.map");
  ASSERT_TRUE(file.lattice);
  EXPECT_EQ(file.lattice->Mf(0, 0), 2);
  EXPECT_FALSE(load_map_file(kDir + "/cremona.map").lattice);
}

TEST(MapFile, RoundTrip) {
  for (const char* name : {"cremona", "henon", "linear", "lsigma"}) {
    const auto file = load_map_file(kDir + "/" + name + ".map");
    const std::string text = serialize_map_file(file);
    const auto again = parse_map_file(text);
    EXPECT_EQ(serialize_map_file(again), text);
    EXPECT_EQ(again.forward, file.forward);
  }
}

TEST(MapFile, BigIntegersAsStrings) {
  std::string text = kSmall;
  text.replace(text.find("[[1, 0, 0, 1, 1"), 15, R"([[1, 0, 0, "123456789012345678901234567890", 11)");
  const auto file = parse_map_file(text);
  EXPECT_EQ(file.forward[0].coefficient({1, 0, 0}).re(), mpq_class("123456789012345678901234567890/11"));
  EXPECT_EQ(parse_map_file(serialize_map_file(file)).forward, file.forward);
}

TEST(MapFile, SyntaxErrorPosition) {
  std::string text = kSmall;
  text.replace(text.find("\"degree\": 1,"), 12, "\"degree\": 1");
  const auto e = parse_failure(text);
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.column(), 3u);
}

TEST(MapFile, MalformedExponentTriple) {
  std::string text = kSmall;
  text.replace(text.find("[[0, 1, 0"), 9, "[[0, 2, 0");
  const auto e = parse_failure(text);
  EXPECT_EQ(e.line(), 6u);
  EXPECT_EQ(e.column(), 6u);
  EXPECT_NE(std::string(e.what()).find("exponents sum to 2"), std::string::npos);
}

TEST(MapFile, SemanticErrors) {
  auto with = [](const std::string& from, const std::string& to) {
    std::string t = kSmall;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  // zero denominator points at the denominator itself
  auto e = parse_failure(with("[[0, 0, 1, 1, 1, 0, 1]]", "[[0, 0, 1, 1, 0, 0, 1]]"));
  EXPECT_EQ(e.line(), 7u);
  EXPECT_EQ(e.column(), 19u);
  e = parse_failure(with("[[0, 0, 1, 1, 1, 0, 1]]", "[[0, 0, 1, 1, 1, 0]]"));
  EXPECT_EQ(e.line(), 7u);
  EXPECT_EQ(e.column(), 6u);
  e = parse_failure(with("[[1, 0, 0, 1", "[[-1, 0, 0, 1"));
  EXPECT_EQ(e.line(), 5u);
  e = parse_failure(with("\"name\": \"t\",", ""));
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 1u);
  EXPECT_NE(std::string(e.what()).find("missing field 'name'"), std::string::npos);
  e = parse_failure(with("\"degree\": 1", "\"degree\": \"one\""));
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 13u);
  // all-zero component is rejected by map validation
  e = parse_failure(with("[[0, 0, 1, 1, 1, 0, 1]]", "[[0, 0, 1, 0, 1, 0, 1]]"));
  EXPECT_EQ(e.line(), 4u);
  e = parse_failure("[1, 2]");
  EXPECT_EQ(e.line(), 1u);
}

TEST(MapFile, InvalidLattice) {
  std::string text = kSmall;
  text.insert(text.rfind('}'), R"(,  "lattice": {"rank": 1, "Q": [[-1]], "Mf": [[1]], "Mfinv": [[1]], "curve_classes": [], "beta_class": [1]}
)");
  text.replace(text.find("]\n,"), 3, "],\n");
  const auto e = parse_failure(text);
  EXPECT_EQ(e.line(), 9u);
  EXPECT_NE(std::string(e.what()).find("invalid lattice"), std::string::npos);
}

TEST(MapFile, MissingFile) { EXPECT_THROW(load_map_file(kDir + "/absent.map"), Error); }
