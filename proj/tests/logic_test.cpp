#include "diagnoscope/logic.hpp"

#include <gtest/gtest.h>

#include "diagnoscope/error.hpp"
#include "diagnoscope/fdl.hpp"
#include "oracle.hpp"

namespace diagnoscope {
namespace {

using testing::load_fixture;
using testing::observe;

class CircuitLogic : public ::testing::Test {
 protected:
  FaultModel model = load_fixture("circuit4.fdl").model;
  CompletedTheory theory = clark_completion(model);

  Interpretation faulty(std::initializer_list<const char*> ids) const {
    std::uint64_t mask = 0;
    for (const char* id : ids) mask |= std::uint64_t{1} << *model.hypothesis_index(id);
    return Interpretation(mask, model.hypothesis_count());
  }
};

std::vector<std::vector<std::string>> fault_sets(const std::vector<Diagnosis>& ds) {
  std::vector<std::vector<std::string>> out;
  for (const auto& d : ds) out.push_back(d.faulty);
  return out;
}

TEST(Formula, RendersWithMinimalParentheses) {
  EXPECT_EQ(parse_formula("!(A & B)").to_string(), "!(A & B)");
  EXPECT_EQ(parse_formula("A & B | C").to_string(), "A & B | C");
  EXPECT_EQ(parse_formula("A & (B | C)").to_string(), "A & (B | C)");
  EXPECT_EQ(parse_formula("A -> B -> C").to_string(), "A -> B -> C");
  EXPECT_EQ(parse_formula("(A -> B) -> C").to_string(), "(A -> B) -> C");
  EXPECT_EQ(parse_formula("!!A").to_string(), "!!A");
}

TEST(Formula, AtomsAndEquality) {
  const Formula f = parse_formula("A & (B | !C) <-> D");
  EXPECT_EQ(f.atoms(), (std::set<std::string, std::less<>>{"A", "B", "C", "D"}));
  EXPECT_EQ(f, parse_formula("A & (B | !C) <-> D"));
  EXPECT_FALSE(f == parse_formula("A & (B | C) <-> D"));
  EXPECT_EQ(Formula().kind(), Formula::Kind::constant_true);
  EXPECT_EQ(Formula::conjunction({}).to_string(), Formula::conjunction({}).to_string());
}

TEST_F(CircuitLogic, CompletionDefinesEachObservable) {
  ASSERT_EQ(theory.definitions().size(), 1u);
  EXPECT_EQ(theory.definitions()[0].observable, "E");
  EXPECT_EQ(theory.definition("E")->to_string(), "A | B & C | B & D");
  EXPECT_EQ(theory.definition("nope"), nullptr);
}

TEST(Completion, SingleAndEmptyBodies) {
  const FaultModel model({{"A", 0.1}}, {{"E", false}, {"F", false}}, {{{"A"}, "E"}, {{}, "F"}});
  const auto theory = clark_completion(model);
  EXPECT_EQ(*theory.definition("E"), Formula::atom("A"));
  EXPECT_EQ(theory.definition("F")->kind(), Formula::Kind::constant_true);
}

TEST_F(CircuitLogic, EvaluatesThroughCompletion) {
  const Formula e = Formula::atom("E");
  EXPECT_TRUE(evaluate_formula(theory, e, faulty({"A"})));
  EXPECT_TRUE(evaluate_formula(theory, e, faulty({"B", "C"})));
  EXPECT_FALSE(evaluate_formula(theory, e, faulty({"B"})));
  EXPECT_FALSE(evaluate_formula(theory, e, faulty({})));
  EXPECT_TRUE(evaluate_formula(theory, parse_formula("B -> E"), faulty({"B", "D"})));
  EXPECT_FALSE(evaluate_formula(theory, parse_formula("B -> E"), faulty({"B"})));
  EXPECT_TRUE(evaluate_formula(theory, parse_formula("E <-> A | B & C"), faulty({"C"})));
}

TEST_F(CircuitLogic, UnknownAtomThrows) {
  try {
    evaluate_formula(theory, Formula::atom("Q"), faulty({}));
    FAIL();
  } catch (const DiagnosisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_atom);
  }
}

TEST(Completion, FreeObservableCannotBeEvaluated) {
  const auto model = load_fixture("constrained.fdl").model;
  const auto theory = clark_completion(model);
  try {
    theory.compile(Formula::atom("Smoke"));
    FAIL();
  } catch (const DiagnosisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_observable);
  }
}

TEST_F(CircuitLogic, ScenarioConsistency) {
  EXPECT_TRUE(scenario_consistent(theory, {{{"A", true}}}, observe("E")));
  EXPECT_FALSE(scenario_consistent(theory, {{{"A", false}, {"B", false}}}, observe("E")));
  EXPECT_TRUE(scenario_consistent(theory, {{{"B", true}}}, observe("E")));
  EXPECT_TRUE(scenario_consistent(theory, {}, observe("E", false)));
}

TEST_F(CircuitLogic, ScenarioExplanation) {
  EXPECT_FALSE(scenario_explains(theory, {{{"B", true}}}, Formula::atom("E")));
  EXPECT_TRUE(scenario_explains(theory, {{{"A", true}}}, Formula::atom("E")));
  EXPECT_TRUE(scenario_explains(theory, {{{"B", true}, {"D", true}}}, Formula::atom("E")));
  EXPECT_TRUE(scenario_explains(theory, {{{"A", false}, {"B", false}}}, parse_formula("!E")));
}

TEST(Scenario, ContradictoryScenarioThrows) {
  const auto model = load_fixture("constrained.fdl").model;
  const auto theory = clark_completion(model);
  try {
    scenario_explains(theory, {{{"A", true}, {"B", true}}}, Formula::atom("E"));
    FAIL();
  } catch (const DiagnosisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::inconsistent_scenario);
  }
  EXPECT_FALSE(scenario_consistent(theory, {{{"A", true}, {"B", true}}}, ObservationSet{}));
}

TEST_F(CircuitLogic, MaximalScenariosCoverEveryAssignment) {
  const auto all = maximal_scenarios(theory, model);
  ASSERT_EQ(all.size(), 16u);
  EXPECT_EQ(all[0].asserted.size(), 4u);
  for (const auto& lit : all[0].asserted) EXPECT_TRUE(lit.positive);
  for (const auto& lit : all[15].asserted) EXPECT_FALSE(lit.positive);
}

TEST(Scenario, FactsPruneMaximalScenarios) {
  const auto model = load_fixture("constrained.fdl").model;
  EXPECT_EQ(maximal_scenarios(clark_completion(model), model).size(), 12u);

  const FaultModel one({{"A", 0.5}}, {}, {});
  EXPECT_EQ(maximal_scenarios(clark_completion(one), one).size(), 2u);
}

TEST_F(CircuitLogic, ConsistencyDiagnoses) {
  const auto ds = consistency_diagnoses(theory, model, observe("E"));
  EXPECT_EQ(fault_sets(ds), (std::vector<std::vector<std::string>>{{"A"}, {"B", "C"}, {"B", "D"}}));
}

TEST_F(CircuitLogic, NegativeObservationGivesEmptyDiagnosis) {
  const auto ds = consistency_diagnoses(theory, model, observe("E", false));
  EXPECT_EQ(fault_sets(ds), (std::vector<std::vector<std::string>>{{}}));
}

TEST_F(CircuitLogic, AbductionMatchesConsistencyOnCircuit) {
  const auto ds = abductive_explanations(theory, model, observe("E"));
  EXPECT_EQ(fault_sets(ds), (std::vector<std::vector<std::string>>{{"A"}, {"B", "C"}, {"B", "D"}}));
}

TEST_F(CircuitLogic, AbductionRejectsNegativeLiterals) {
  try {
    abductive_explanations(theory, model, observe("E", false));
    FAIL();
  } catch (const DiagnosisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::negative_observation);
  }
}

TEST_F(CircuitLogic, UndeclaredObservableThrows) {
  try {
    consistency_diagnoses(theory, model, observe("X"));
    FAIL();
  } catch (const DiagnosisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_atom);
  }
}

TEST(Diagnoses, UnexplainableObservation) {
  // E requires A, but A can never be faulty under the fact.
  const FaultModel model({{"A", 0.1}}, {{"E", false}}, {{{"A"}, "E"}}, {parse_formula("!A")});
  const auto theory = clark_completion(model);
  for (auto* fn : {&consistency_diagnoses, &abductive_explanations}) {
    try {
      fn(theory, model, observe("E"), {});
      FAIL();
    } catch (const DiagnosisError& e) {
      EXPECT_EQ(e.code(), ErrorCode::observation_unexplainable);
    }
  }
}

TEST(Diagnoses, HypothesisCapIsEnforced) {
  std::vector<Hypothesis> hyps;
  for (int i = 0; i < 5; ++i) hyps.push_back({"H" + std::to_string(i), 0.1});
  const FaultModel model(hyps, {{"E", false}}, {{{"H0"}, "E"}});
  EnumerationLimits limits;
  limits.max_hypotheses = 4;
  try {
    consistency_diagnoses(clark_completion(model), model, observe("E"), limits);
    FAIL();
  } catch (const DiagnosisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::hypothesis_space_too_large);
  }
}

TEST(FaultMaskOrder, CardinalityThenDeclarationOrder) {
  EXPECT_TRUE(fault_mask_less(0b1000, 0b0011));
  EXPECT_TRUE(fault_mask_less(0b0011, 0b0101));
  EXPECT_TRUE(fault_mask_less(0b0001, 0b0010));
  EXPECT_FALSE(fault_mask_less(0b0010, 0b0010));
  const std::vector<std::string> ids{"A", "B", "C"};
  EXPECT_EQ(fault_names(ids, 0b101), (std::vector<std::string>{"A", "C"}));
}

}  // namespace
}  // namespace diagnoscope
