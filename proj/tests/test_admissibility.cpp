#include <gtest/gtest.h>

#include <random>

#include "ltlpm/ltlpm.hpp"
#include "oracle.hpp"

using namespace ltlpm;

namespace {

const char* const kAdmissibleInvalid[] = {"N x / x", "N x1 -> N x2 / x1 -> x2", "(N x1) S (N x2) / x1 S x2"};

// Random Boolean template over the given slot formulas.
Formula random_template(std::mt19937_64& rng, const std::vector<Formula>& slots, std::size_t depth) {
  if (depth == 0 || rng() % 3 == 0) return slots[rng() % slots.size()];
  switch (rng() % 4) {
    case 0: return Formula::negation(random_template(rng, slots, depth - 1));
    case 1: return Formula::conjunction(random_template(rng, slots, depth - 1), random_template(rng, slots, depth - 1));
    case 2: return Formula::disjunction(random_template(rng, slots, depth - 1), random_template(rng, slots, depth - 1));
    default: return Formula::implication(random_template(rng, slots, depth - 1), random_template(rng, slots, depth - 1));
  }
}

}  // namespace

TEST(Witness, TautologyPremise) {
  const SearchBudget b{0, 1, 1};
  const auto s = find_non_admissibility_witness(parse_rule("x | ~x / x"), b);
  ASSERT_TRUE(s);
  EXPECT_EQ(render(*s), "{x -> p}");
  EXPECT_TRUE(is_theorem(parse_formula("p | ~p"), 1).theorem);
  EXPECT_FALSE(is_theorem(parse_formula("p"), 1).theorem);
}

TEST(Witness, IdentityHasNone) {
  for (std::size_t d = 0; d <= 2; ++d) EXPECT_FALSE(find_non_admissibility_witness(parse_rule("x / x"), {d, 1, 1}));
}

TEST(Witness, AdmissibleInvalidHaveNone) {
  for (const char* text : kAdmissibleInvalid)
    EXPECT_FALSE(find_non_admissibility_witness(parse_rule(text), {2, 1, 1})) << text;
}

TEST(NElimination, Examples) {
  auto a = match_n_elimination(parse_rule("N x / x"));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->template_text, "p1");
  auto b = match_n_elimination(parse_rule("N x1 -> N x2 / x1 -> x2"));
  ASSERT_TRUE(b);
  EXPECT_EQ(b->template_text, "p1 -> p2");
  ASSERT_EQ(b->p_slots.size(), 2u);
  auto c = match_n_elimination(parse_rule("(N x1) S (N x2) / x1 S x2"));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->template_text, "q1");
  ASSERT_EQ(c->q_slots.size(), 1u);

  EXPECT_FALSE(match_n_elimination(parse_rule("x / N x")));
  EXPECT_FALSE(match_n_elimination(parse_rule("x / x")));
  EXPECT_FALSE(match_n_elimination(parse_rule("N x / y")));
  EXPECT_FALSE(match_n_elimination(parse_rule("N x & x / x & x")));
}

TEST(Status, Examples) {
  const SearchBudget b{2, 1, 1};
  const auto id = admissible_status(parse_rule("x / x"), b);
  EXPECT_EQ(id.kind, AdmissibilityKind::Admissible);
  EXPECT_EQ(id.certificate, CertificateKind::FrameValidity);

  for (const char* text : kAdmissibleInvalid) {
    const auto v = admissible_status(parse_rule(text), b);
    EXPECT_EQ(v.kind, AdmissibilityKind::Admissible) << text;
    EXPECT_EQ(v.certificate, CertificateKind::NElimination) << text;
    ASSERT_TRUE(v.frame_countermodel) << text;
    EXPECT_FALSE(oracle::naive_rule_holds(v.frame_countermodel->model, parse_rule(text)));
  }

  const auto na = admissible_status(parse_rule("x | ~x / x"), b);
  EXPECT_EQ(na.kind, AdmissibilityKind::NotAdmissible);
  ASSERT_TRUE(na.witness);
  EXPECT_EQ(render(*na.witness), "{x -> p}");
  ASSERT_TRUE(na.conclusion_countermodel);
  EXPECT_FALSE(oracle::naive_eval(na.conclusion_countermodel->model, parse_formula("p"),
                                  na.conclusion_countermodel->position));
  const auto j = to_json(na);
  EXPECT_EQ(j["verdict"], "not_admissible");
  EXPECT_EQ(j["witness"]["x"], "p");
  EXPECT_EQ(j["bounds"]["max_depth"], 2);
}

TEST(Status, UnknownWithinBudget) {
  // Not frame valid, no pattern, and no refuting substitution at depth 0.
  const auto v = admissible_status(parse_rule("x S y / y"), {0, 1, 1});
  EXPECT_NE(v.kind, AdmissibilityKind::Admissible);
  if (v.kind == AdmissibilityKind::NotAdmissible) {
    const Rule inst = parse_rule("x S y / y");
    EXPECT_TRUE(is_theorem(apply_substitution(inst.premises()[0], *v.witness), 1).theorem);
  }
  const auto j = to_json(v);
  EXPECT_TRUE(j["certificate"].is_null());
  EXPECT_FALSE(j["frame_valid"].get<bool>());
}

TEST(Unifiable, Examples) {
  const SearchBudget b{0, 1, 1};
  auto s = premises_unifiable(parse_rule("x / y"), b);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->at("x"), Formula::top());
  for (std::size_t d = 0; d <= 2; ++d) EXPECT_FALSE(premises_unifiable(parse_rule("x & ~x / y"), {d, 1, 1}));
  auto t = premises_unifiable(parse_rule("(N x -> x) & (x -> N x) / y"), b);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->at("x"), Formula::top());
  EXPECT_TRUE(is_theorem(parse_formula("(N true -> true) & (true -> N true)"), 1).theorem);
}

TEST(Soundness, FrameValidityHasNoWitness) {
  std::mt19937_64 rng(51);
  oracle::FormulaShape shape;
  shape.letters = {"x"};
  shape.depth = 2;
  shape.knowledge = false;
  int valid = 0;
  for (int i = 0; i < 200 && valid < 15; ++i) {
    const Rule r({oracle::random_formula(rng, shape)}, oracle::random_formula(rng, shape));
    if (frame_valid_rule(r, 1)) continue;
    ++valid;
    for (std::size_t d = 0; d <= 1; ++d) EXPECT_FALSE(find_non_admissibility_witness(r, {d, 1, 1})) << render(r);
  }
  EXPECT_GE(valid, 10);
}

TEST(Soundness, WitnessesVerify) {
  std::mt19937_64 rng(52);
  oracle::FormulaShape shape;
  shape.letters = {"x"};
  shape.depth = 2;
  int found = 0;
  for (int i = 0; i < 150; ++i) {
    const Rule r({oracle::random_formula(rng, shape)}, oracle::random_formula(rng, shape));
    const auto v = admissible_status(r, {1, 1, 1});
    if (v.kind != AdmissibilityKind::NotAdmissible) continue;
    ++found;
    for (const auto& p : r.premises()) EXPECT_TRUE(is_theorem(apply_substitution(p, *v.witness), 1).theorem);
    const Formula c = apply_substitution(r.conclusion(), *v.witness);
    ASSERT_TRUE(v.conclusion_countermodel);
    EXPECT_FALSE(oracle::naive_eval(v.conclusion_countermodel->model, c, v.conclusion_countermodel->position));
  }
  EXPECT_GT(found, 0);
}

TEST(Soundness, NEliminationFamily) {
  std::mt19937_64 rng(53);
  const std::vector<Formula> vars{Formula::atom("x"), Formula::atom("y")};
  int instances = 0;
  while (instances < 24) {
    // n N-slots and k S-slots with n + k <= 3 over at most two variables.
    const std::size_t n = rng() % 3, k = rng() % (4 - n);
    if (n + k == 0) continue;
    std::vector<Formula> prem, conc;
    for (std::size_t i = 0; i < n; ++i) {
      const Formula a = vars[rng() % 2];
      prem.push_back(Formula::next(a));
      conc.push_back(a);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const Formula b = vars[rng() % 2], c = vars[rng() % 2];
      prem.push_back(Formula::since(Formula::next(b), Formula::next(c)));
      conc.push_back(Formula::since(b, c));
    }
    std::vector<Formula> holes;
    for (std::size_t i = 0; i < prem.size(); ++i) holes.push_back(Formula::atom("h" + std::to_string(i)));
    const Formula t = random_template(rng, holes, 2);
    Substitution to_prem, to_conc;
    for (std::size_t i = 0; i < prem.size(); ++i) {
      to_prem.emplace("h" + std::to_string(i), prem[i]);
      to_conc.emplace("h" + std::to_string(i), conc[i]);
    }
    const Rule r({apply_substitution(t, to_prem)}, apply_substitution(t, to_conc));
    ASSERT_TRUE(match_n_elimination(r)) << render(r);
    EXPECT_FALSE(find_non_admissibility_witness(r, {2, 1, 1})) << render(r);
    ++instances;
  }
}

TEST(Consistency, RuleAndNormalForm) {
  std::mt19937_64 rng(54);
  oracle::FormulaShape shape;
  shape.letters = {"x"};
  shape.depth = 2;
  shape.knowledge = false;
  int definite = 0;
  for (int i = 0; i < 40; ++i) {
    const Rule r({oracle::random_formula(rng, shape)}, oracle::random_formula(rng, shape, 1));
    AdmissibilityVerdict v;
    try {
      v = admissible_status(r, {0, 1, 1}, {true});
    } catch (const CapacityExceeded&) {
      continue;
    }
    definite += v.kind != AdmissibilityKind::Unknown;
  }
  EXPECT_GT(definite, 20);
}
