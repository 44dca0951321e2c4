#include <gtest/gtest.h>

#include <random>

#include "ltlpm/ltlpm.hpp"
#include "oracle.hpp"

using namespace ltlpm;
using nlohmann::json;

namespace {

PeriodicModel one_letter(std::vector<bool> prefix, std::vector<bool> loop, std::size_t m, const char* name = "x") {
  std::vector<Row> p, l;
  for (bool b : prefix) p.push_back(Row{b});
  for (bool b : loop) l.push_back(Row{b});
  return PeriodicModel({name}, p, l, Bound::uniform(m));
}

// p only at 2, q at 0 and 1.
PeriodicModel since_example(std::size_t m) {
  return PeriodicModel({"p", "q"}, {{false, true}, {false, true}, {true, false}}, {{false, false}}, Bound::uniform(m));
}

}  // namespace

TEST(Eval, SeparationExample) {
  const auto model = one_letter({true, true, false}, {false}, 1);
  EXPECT_FALSE(eval(model, parse_formula("[]x -> [][]x"), 0));
  EXPECT_TRUE(eval(model, parse_formula("[]x"), 0));
  EXPECT_FALSE(eval(model, parse_formula("[][]x"), 0));
}

TEST(Eval, SinceWindow) {
  EXPECT_TRUE(eval(since_example(2), parse_formula("q S p"), 0));
  EXPECT_FALSE(eval(since_example(1), parse_formula("q S p"), 0));
  EXPECT_TRUE(eval(since_example(1), parse_formula("q S p"), 1));
  EXPECT_TRUE(eval(since_example(1), parse_formula("q S p"), 2));
  EXPECT_FALSE(eval(since_example(1), parse_formula("q S p"), 3));
}

TEST(Eval, NextAndConstants) {
  const auto model = one_letter({false}, {true}, 1);
  EXPECT_FALSE(eval(model, parse_formula("x"), 0));
  EXPECT_TRUE(eval(model, parse_formula("N x"), 0));
  EXPECT_TRUE(eval(model, parse_formula("true"), 7));
  EXPECT_FALSE(eval(model, parse_formula("false"), 7));
}

TEST(Eval, UnknownAtom) {
  const auto model = one_letter({}, {true}, 1);
  try {
    eval(model, parse_formula("x & y"), 0);
    FAIL();
  } catch (const UnknownAtom& e) {
    EXPECT_EQ(e.name(), "y");
  }
}

TEST(TruthVectorTest, Examples) {
  const auto all_p = one_letter({}, {true}, 1, "p");
  EXPECT_TRUE(truth_vector(all_p, parse_formula("p")).all());
  EXPECT_EQ(truth_vector(all_p, parse_formula("K1 p")), truth_vector(all_p, parse_formula("p")));

  const auto tv = truth_vector(one_letter({true, true, false}, {false}, 1), parse_formula("[]x"));
  EXPECT_EQ(tv.offset, 3u);
  EXPECT_EQ(tv.prefix_truth, (std::vector<bool>{true, false, false}));
  EXPECT_EQ(tv.loop_truth, (std::vector<bool>{false}));
  EXPECT_EQ(tv.first_false(), std::optional<std::size_t>(1));
}

TEST(Unbounded, Examples) {
  std::vector<Row> prefix(5, Row{false, true});
  const PeriodicModel model({"p", "q"}, prefix, {{true, true}}, Bound::uniform(1));
  EXPECT_TRUE(eval_unbounded(model, parse_formula("q S p"), 0));
  EXPECT_FALSE(eval(model, parse_formula("q S p"), 0));
}

TEST(Unbounded, BoxTransitiveOnSmallModels) {
  const Formula f = parse_formula("[]x -> [][]x");
  oracle::for_each_model({"x"}, 1, 5, [&](const PeriodicModel& model) {
    for (std::size_t a = 0; a < oracle::horizon(model) + 2; ++a) EXPECT_TRUE(eval_unbounded(model, f, a));
    return false;
  });
}

TEST(RuleHolds, Examples) {
  const auto model = one_letter({false}, {true}, 1);
  EXPECT_TRUE(rule_holds(model, parse_rule("x / x")));
  EXPECT_FALSE(rule_holds(model, parse_rule("N x / x")));
  EXPECT_FALSE(rule_holds(model, parse_rule("x | ~x / x")));
  EXPECT_TRUE(rule_holds(one_letter({}, {true}, 1), parse_rule("x | ~x / x")));
}

TEST(Shift, Examples) {
  const PeriodicModel model({"p"}, {{true}, {false}}, {{true}}, Bound::uniform(1));
  EXPECT_EQ(shift(model, 0), model);
  const auto s = shift(model, 2);
  EXPECT_TRUE(s.prefix().empty());
  EXPECT_EQ(s.loop(), (std::vector<Row>{{true}}));
  EXPECT_THROW(shift(PeriodicModel({"p"}, {}, {{true}}, Bound::non_uniform({1}, {2})), 1), NonUniformShift);
}

TEST(NonUniform, WindowsGrow) {
  // p only at 3; windows 1, 2, 3, 3, ...
  const PeriodicModel model({"p", "q"}, {{false, true}, {false, true}, {false, true}, {true, true}}, {{false, true}},
                            Bound::non_uniform({1, 2}, {3}));
  EXPECT_FALSE(eval(model, parse_formula("q S p"), 0));
  EXPECT_TRUE(eval(model, parse_formula("q S p"), 1));
  EXPECT_TRUE(eval(model, parse_formula("q S p"), 2));
  EXPECT_FALSE(eval(model, parse_formula("q S p"), 4));
}

TEST(NonUniform, BoundValidation) {
  EXPECT_THROW(Bound::non_uniform({2, 1}, {3}), InvalidModel);
  EXPECT_THROW(Bound::non_uniform({1}, {2, 3}), InvalidModel);
  EXPECT_THROW(Bound::non_uniform({3}, {2}), InvalidModel);
  EXPECT_THROW(Bound::non_uniform({0}, {2}), InvalidModel);
  EXPECT_THROW(Bound::uniform(0), InvalidModel);
}

TEST(ModelJson, RoundTrip) {
  const auto model = since_example(2);
  EXPECT_EQ(model_from_json(to_json(model)), model);
  const PeriodicModel nu({"p"}, {{true}}, {{false}}, Bound::non_uniform({1, 2}, {2}));
  EXPECT_EQ(model_from_json(to_json(nu)), nu);
}

TEST(ModelJson, PathQualifiedErrors) {
  auto path_of = [](const json& j) {
    try {
      model_from_json(j);
    } catch (const InvalidModel& e) {
      return e.path();
    }
    return std::string("<accepted>");
  };
  const json good = to_json(since_example(1));

  json j = good;
  j["prefix"][1].erase("q");
  EXPECT_EQ(path_of(j), "/prefix/1");

  j = good;
  j["loop"] = json::array();
  EXPECT_EQ(path_of(j), "/loop");

  j = good;
  j["loop"][0]["p"] = "yes";
  EXPECT_EQ(path_of(j), "/loop/0/p");

  j = good;
  j["prefix"][0]["r"] = true;
  EXPECT_EQ(path_of(j), "/prefix/0/r");

  j = good;
  j.erase("letters");
  EXPECT_EQ(path_of(j), "/letters");

  j = good;
  j["bound"] = {{"uniform", 0}};
  EXPECT_EQ(path_of(j), "/bound/uniform");

  j = good;
  j["bound"] = {{"window_prefix", {2, 1}}, {"window_loop", {2}}};
  EXPECT_EQ(path_of(j), "/bound/window_prefix/1");

  j = good;
  j["bound"] = {{"window_prefix", json::array()}, {"window_loop", {2, 3}}};
  EXPECT_EQ(path_of(j), "/bound/window_loop/1");

  j = good;
  j["letters"] = {"p", "q", "p"};
  EXPECT_EQ(path_of(j), "/letters/2");
}

TEST(Invariants, AgreesWithDirectEvaluation) {
  std::mt19937_64 rng(21);
  oracle::FormulaShape shape;
  for (int i = 0; i < 400; ++i) {
    const Formula f = oracle::random_formula(rng, shape);
    const bool uniform = i % 3 != 0;
    const Bound bound = uniform ? Bound::uniform(1 + rng() % 3) : Bound::non_uniform({1, 2}, {3});
    const auto model = oracle::random_model(rng, shape.letters, 4, 3, bound);
    const auto tv = truth_vector(model, f);
    const auto tu = truth_vector(model, f, SinceMode::Unbounded);
    for (std::size_t a = 0; a < oracle::horizon(model) + 4; ++a) {
      ASSERT_EQ(tv.at(a), oracle::naive_eval(model, f, a)) << render(f) << " @" << a;
      ASSERT_EQ(eval(model, f, a), tv.at(a));
      ASSERT_EQ(tu.at(a), oracle::naive_eval(model, f, a, true)) << render(f) << " @" << a;
    }
  }
}

TEST(Invariants, PositiveSinceMonotone) {
  std::mt19937_64 rng(22);
  const Formula f = parse_formula("q S p");
  for (int i = 0; i < 300; ++i) {
    const auto model = oracle::random_model(rng, {"p", "q"}, 4, 3, Bound::uniform(1 + rng() % 3));
    for (std::size_t a = 0; a < 8; ++a)
      if (eval(model, f, a)) EXPECT_TRUE(eval_unbounded(model, f, a));
  }
}

TEST(Invariants, Classicality) {
  std::mt19937_64 rng(23);
  oracle::FormulaShape shape;
  shape.depth = 2;
  for (int i = 0; i < 300; ++i) {
    const Formula g = oracle::random_formula(rng, shape);
    const Formula h = oracle::random_formula(rng, shape);
    const auto model = oracle::random_model(rng, shape.letters, 3, 3, Bound::uniform(1 + rng() % 2));
    for (std::size_t a = 0; a < 6; ++a) {
      const bool x = eval(model, g, a), y = eval(model, h, a);
      EXPECT_EQ(eval(model, Formula::negation(g), a), !x);
      EXPECT_EQ(eval(model, Formula::conjunction(g, h), a), x && y);
      EXPECT_EQ(eval(model, Formula::disjunction(g, h), a), x || y);
      EXPECT_EQ(eval(model, Formula::implication(g, h), a), !x || y);
    }
  }
}

TEST(Invariants, ShiftAgainstNext) {
  std::mt19937_64 rng(24);
  oracle::FormulaShape shape;
  for (int i = 0; i < 300; ++i) {
    const Formula f = oracle::random_formula(rng, shape);
    const auto model = oracle::random_model(rng, shape.letters, 3, 3, Bound::uniform(1 + rng() % 2));
    const auto s = shift(model, 1);
    for (std::size_t a = 0; a < 6; ++a) EXPECT_EQ(eval(model, f, a + 1), eval(s, f, a));
  }
}
