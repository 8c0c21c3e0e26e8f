#include <gtest/gtest.h>

#include <random>

#include "fluxtrace/model.hpp"
#include "generators.hpp"

using namespace fluxtrace;

namespace {

const char* kDiamond =
    "init A * 1\nr1: A -> P + P @ 1.0\nr2: P -> B @ 1.0\nr3: P -> C @ 1.0\nr4: B + C -> D @ 1.0";

ParseError parse_error_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return ParseError(0, 0, "");
}

}  // namespace

TEST(ModelParse, DiamondExample) {
  const Model m = parse_model(kDiamond);
  EXPECT_EQ(m.initial_count("A"), 1u);
  EXPECT_EQ(m.initial_size(), 1u);
  ASSERT_EQ(m.reactions().size(), 4u);
  EXPECT_EQ(m.reactions()[0].name(), "r1");
  EXPECT_EQ(m.reactions()[0].products(), (std::vector<std::string>{"P", "P"}));
  EXPECT_EQ(m.reactions()[3].reactants(), (std::vector<std::string>{"B", "C"}));
  EXPECT_DOUBLE_EQ(m.reactions()[3].rate(), 1.0);
  EXPECT_EQ(m.species(), (std::vector<std::string>{"A", "B", "C", "D", "P"}));
}

TEST(ModelParse, EmptyInitAndEmptyProducts) {
  const Model m = parse_model("init A * 0\nr1: A -> @ 1.0");
  EXPECT_EQ(m.initial_size(), 0u);
  ASSERT_EQ(m.reactions().size(), 1u);
  EXPECT_TRUE(m.reactions()[0].products().empty());
}

TEST(ModelParse, InitLinesAreSummedAndCommentsIgnored) {
  const Model m = parse_model("# header\ninit A * 2  # two\ninit A*3\n\nr: A -> B @ 2e-1\n");
  EXPECT_EQ(m.initial_count("A"), 5u);
  EXPECT_DOUBLE_EQ(m.reactions()[0].rate(), 0.2);
}

TEST(ModelParse, RhoTranscription) {
  const Model m = parse_model(fixtures::model_text("rho_gtp.rxn"));
  EXPECT_EQ(m.reactions().size(), 27u);
  EXPECT_EQ(m.species().size(), 11u);
  EXPECT_EQ(m.initial_count("R"), 1000u);
  EXPECT_EQ(m.initial_count("E"), 776u);
  EXPECT_EQ(m.initial_count("A"), 1u);
  const Reaction* r = m.find_reaction("RD_RDE");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(describe(*r), "RD + E -> RDE");
  EXPECT_DOUBLE_EQ(r->rate(), 0.0054);
  EXPECT_EQ(describe(*m.find_reaction("RTE_RT")), "RTE -> RT + E");
  EXPECT_DOUBLE_EQ(m.find_reaction("RTE_RT")->rate(), 76.8);
  EXPECT_DOUBLE_EQ(m.find_reaction("RTA_RDA")->rate(), 2104.0);
}

TEST(ModelParse, Errors) {
  EXPECT_NE(parse_error_of("r1: A + B + C -> D @ 1.0").detail().find("too many reactants"),
            std::string::npos);
  EXPECT_NE(parse_error_of("r1: -> D @ 1.0").detail().find("no reactants"), std::string::npos);
  EXPECT_NE(parse_error_of("r1: A -> B @ 0").detail().find("positive"), std::string::npos);
  EXPECT_NE(parse_error_of("r1: A -> B @ -1").detail().find("positive"), std::string::npos);
  EXPECT_NE(parse_error_of("r1: A -> B @ 1\nr1: B -> A @ 1").detail().find("duplicate"),
            std::string::npos);
  EXPECT_NE(parse_error_of("r1: A\\n -> B @ 1").detail().find("escape"), std::string::npos);
  EXPECT_NE(parse_error_of("init: A -> B @ 1").detail().find("reserved"), std::string::npos);

  const ParseError e = parse_error_of("r1: A -> B @ 1.0\nr2: A -> B C @ 1.0");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_GT(e.column(), 0u);
}

TEST(ModelParse, GarbageAlwaysYieldsStructuredErrors) {
  std::mt19937_64 g(7);
  const std::string alphabet = "AB r1:+->@*#0.5e\\_\n\t(),;init";
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const int n = gen::uniform(g, 0, 40);
    for (int k = 0; k < n; ++k) text += alphabet[gen::uniform(g, 0, int(alphabet.size()) - 1)];
    try {
      const Model m = parse_model(text);
      EXPECT_EQ(parse_model(serialize_model(m)), m) << text;
    } catch (const ParseError&) {
    }
  }
}

TEST(ModelSerialize, RoundTrips) {
  for (const char* name : {"diamond.rxn", "rho_gtp.rxn", "rho_gtp_reduced.rxn"}) {
    const Model m = parse_model(fixtures::model_text(name));
    EXPECT_EQ(parse_model(serialize_model(m)), m) << name;
  }
  const Model empty;
  EXPECT_EQ(parse_model(serialize_model(empty)), empty);

  std::mt19937_64 g(11);
  for (int i = 0; i < 200; ++i) {
    const Model m = gen::random_model(g);
    EXPECT_EQ(parse_model(serialize_model(m)), m);
  }
}

TEST(ModelSerialize, KeepsAwkwardRates) {
  const Model m({{"A", 1}}, {Reaction("r", {"A"}, {}, 0.1 + 0.2), Reaction("s", {"A"}, {"A"}, 1e-300)});
  const Model back = parse_model(serialize_model(m));
  EXPECT_EQ(back.reactions()[0].rate(), 0.1 + 0.2);
  EXPECT_EQ(back.reactions()[1].rate(), 1e-300);
}

TEST(Reaction, ArityAndRateEnforced) {
  EXPECT_THROW(Reaction("r", {}, {"A"}, 1.0), std::invalid_argument);
  EXPECT_THROW(Reaction("r", {"A", "B", "C"}, {}, 1.0), std::invalid_argument);
  EXPECT_THROW(Reaction("r", {"A"}, {}, 0.0), std::invalid_argument);
  EXPECT_THROW(Reaction("r", {"A"}, {}, std::numeric_limits<double>::infinity()),
               std::invalid_argument);
  EXPECT_THROW(Reaction("r", {"1A"}, {}, 1.0), std::invalid_argument);
  const Reaction dimer("d", {"A", "A"}, {"B"}, 1.0);
  EXPECT_TRUE(dimer.is_homodimer());
  EXPECT_EQ(dimer.consumed("A"), 2u);
}

TEST(ModelInvariants, DuplicateNamesRejected) {
  EXPECT_THROW(Model({}, {Reaction("r", {"A"}, {}, 1.0), Reaction("r", {"B"}, {}, 1.0)}),
               std::invalid_argument);
  EXPECT_THROW(Model({}, {Reaction("init", {"A"}, {}, 1.0)}), std::invalid_argument);
}
