#include <gtest/gtest.h>

#include <random>

#include "ltlpm/ltlpm.hpp"
#include "oracle.hpp"

using namespace ltlpm;

TEST(RefutableRnf, Examples) {
  EXPECT_FALSE(refutable_rnf(rnf_transform(parse_rule("x / x")), 1));
  EXPECT_FALSE(refutable_rnf(rnf_transform(parse_rule("x & ~x / x")), 1));

  const auto w = refutable_rnf(rnf_transform(parse_rule("N x / x")), 1);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->verdict, Verdict::Refuted);
  EXPECT_FALSE(oracle::letter(w->model, "x", w->position));
  for (std::size_t a = 0; a < 6; ++a) EXPECT_TRUE(oracle::naive_eval(w->model, parse_formula("N x"), a));
}

TEST(Satisfiable, Examples) {
  for (std::size_t m : {1, 2, 3}) EXPECT_FALSE(satisfiable(parse_formula("p & ~p"), m));

  const auto p = satisfiable(parse_formula("p"), 1);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->verdict, Verdict::Sat);
  EXPECT_TRUE(oracle::letter(p->model, "p", 0));

  const Formula sep = parse_formula("[]x & ~[][]x");
  const auto w = satisfiable(sep, 1);
  ASSERT_TRUE(w);
  EXPECT_TRUE(oracle::naive_eval(w->model, sep, 0));
}

TEST(Satisfiable, WitnessJson) {
  const auto w = satisfiable(parse_formula("p & N ~p"), 1);
  ASSERT_TRUE(w);
  const auto j = to_json(*w);
  EXPECT_EQ(j["verdict"], "sat");
  EXPECT_EQ(j["position"], 0);
  EXPECT_EQ(model_from_json(j), w->model);
}

TEST(Satisfiable, Deterministic) {
  std::mt19937_64 rng(41);
  oracle::FormulaShape shape;
  for (int i = 0; i < 40; ++i) {
    const Formula f = oracle::random_formula(rng, shape);
    const auto a = satisfiable(f, 2);
    const auto b = satisfiable(f, 2);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_EQ(to_json(*a), to_json(*b));
  }
}

TEST(Satisfiable, Capacity) {
  EXPECT_THROW(satisfiable(parse_formula("[][]p & <>q"), 3, 4), CapacityExceeded);
}

TEST(Theorem, Examples) {
  EXPECT_TRUE(is_theorem(parse_formula("p | ~p"), 1).theorem);
  EXPECT_TRUE(is_theorem(parse_formula("(K1 p -> p) & (p -> K1 p)"), 2).theorem);
  EXPECT_TRUE(is_theorem(parse_formula("N true"), 1).theorem);

  for (std::size_t m : {1, 2, 3}) {
    const Formula f = parse_formula("[]x -> [][]x");
    const auto r = is_theorem(f, m);
    EXPECT_FALSE(r.theorem);
    ASSERT_TRUE(r.countermodel);
    EXPECT_EQ(r.countermodel->verdict, Verdict::Refuted);
    EXPECT_FALSE(oracle::naive_eval(r.countermodel->model, f, r.countermodel->position));
  }
}

TEST(FrameValidRule, Examples) {
  EXPECT_FALSE(frame_valid_rule(parse_rule("x / x"), 1));
  EXPECT_FALSE(frame_valid_rule(parse_rule("x -> x / p | ~p"), 1));
  EXPECT_TRUE(is_theorem(parse_formula("p | ~p"), 1).theorem);

  const Rule r = parse_rule("N x / x");
  const auto w = frame_valid_rule(r, 1);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->model.letters(), (std::vector<std::string>{"x"}));
  EXPECT_FALSE(oracle::naive_rule_holds(w->model, r));
  EXPECT_FALSE(oracle::naive_eval(w->model, r.conclusion(), w->position));
}

TEST(BruteForce, Examples) {
  EXPECT_FALSE(brute_force_sat(parse_formula("p & ~p"), 1, 3));
  const auto w = brute_force_sat(parse_formula("p"), 1, 1);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->model.prefix().empty());
  EXPECT_EQ(w->model.loop(), (std::vector<Row>{{true}}));
}

TEST(Decision, TheoremIffTautologyPremiseRuleValid) {
  std::mt19937_64 rng(42);
  oracle::FormulaShape shape;
  shape.depth = 2;
  for (int i = 0; i < 40; ++i) {
    const Formula f = oracle::random_formula(rng, shape);
    const Rule r({parse_formula("x -> x")}, f);
    EXPECT_EQ(is_theorem(f, 1).theorem, !frame_valid_rule(r, 1).has_value()) << render(f);
  }
}

TEST(Decision, AgreesWithBruteForce) {
  std::mt19937_64 rng(43);
  oracle::FormulaShape shape;
  shape.depth = 2;
  for (int i = 0; i < 60; ++i) {
    const Formula f = oracle::random_formula(rng, shape);
    const std::size_t m = 1 + i % 2;
    const auto w = satisfiable(f, m);
    const std::size_t bound = std::min<std::size_t>(m + 1 + window_node_count(f, m), temporal_reach(expand_derived(f), m) + 1);
    EXPECT_EQ(w.has_value(), brute_force_sat(f, m, bound).has_value()) << render(f);
    if (w) EXPECT_TRUE(oracle::naive_eval(w->model, f, 0));
  }
}
