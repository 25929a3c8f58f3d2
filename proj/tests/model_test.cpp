#include "diagnoscope/model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "oracle.hpp"

namespace diagnoscope {
namespace {

using testing::load_fixture;

FaultModel two_cause_model() {
  return FaultModel({{"A", 0.1}, {"B", 0.2}}, {{"E", false}}, {{{"A"}, "E"}, {{"B"}, "E"}});
}

TEST(FaultModel, CircuitValidatesClean) {
  const auto bundle = load_fixture("circuit4.fdl");
  EXPECT_TRUE(validate_model(bundle.model).empty());
  EXPECT_EQ(bundle.model.hypothesis_count(), 4u);
  EXPECT_EQ(*bundle.model.hypothesis_index("C"), 2u);
  EXPECT_TRUE(bundle.model.is_observable("E"));
  EXPECT_FALSE(bundle.model.is_hypothesis("E"));
}

TEST(FaultModel, PriorOutOfRangeIsOneFinding) {
  const auto model = load_fixture("circuit4.fdl").model.with_prior("A", 1.3);
  const auto findings = validate_model(model);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].kind, FindingKind::prior_out_of_range);
  EXPECT_EQ(findings[0].subject, "A");
  EXPECT_NE(findings[0].message.find("1.3"), std::string::npos);
}

TEST(FaultModel, BoundaryPriorsAreAllowed) {
  EXPECT_TRUE(validate_model(two_cause_model().with_prior("A", 0.0).with_prior("B", 1.0)).empty());
  EXPECT_EQ(validate_model(two_cause_model().with_prior("B", -0.01)).size(), 1u);
}

TEST(FaultModel, UndeclaredRuleHeadIsOneFinding) {
  const FaultModel model({{"A", 0.1}}, {}, {{{"A"}, "X"}});
  const auto findings = validate_model(model);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].kind, FindingKind::unknown_observable);
  EXPECT_EQ(findings[0].subject, "X");
}

TEST(FaultModel, ValidationIsIdempotent) {
  const FaultModel model({{"A", 1.3}, {"A", 0.2}}, {{"E", false}, {"F", false}},
                         {{{"Q"}, "E"}, {{"A"}, "Z"}});
  const auto first = validate_model(model);
  EXPECT_EQ(first, validate_model(model));
  EXPECT_GE(first.size(), 4u);
}

TEST(FaultModel, StructuralFindings) {
  const FaultModel model({{"A", 0.1}, {"A", 0.2}, {"E", 0.1}},
                         {{"E", false}, {"F", false}, {"S", true}}, {{{"Q"}, "E"}, {{"A"}, "S"}},
                         {Formula::atom("F")});
  std::vector<FindingKind> kinds;
  for (const auto& f : validate_model(model)) kinds.push_back(f.kind);
  const auto has = [&](FindingKind k) {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
  };
  EXPECT_TRUE(has(FindingKind::duplicate_id));
  EXPECT_TRUE(has(FindingKind::unknown_hypothesis));
  EXPECT_TRUE(has(FindingKind::undefined_observable));
  EXPECT_TRUE(has(FindingKind::free_observable_with_rules));
  EXPECT_TRUE(has(FindingKind::fact_mentions_non_hypothesis));
}

TEST(FaultModel, ConstructionNeverThrows) {
  EXPECT_NO_THROW(FaultModel({{"A", 7.0}}, {}, {{{"nothing"}, "nowhere"}}));
}

TEST(FaultModel, WithHypothesisAppends) {
  const auto extended = two_cause_model().with_hypothesis({"Z", 0.5});
  ASSERT_EQ(extended.hypothesis_count(), 3u);
  EXPECT_EQ(extended.hypotheses().back().id, "Z");
  EXPECT_EQ(*extended.hypothesis_index("Z"), 2u);
  EXPECT_FALSE(extended == two_cause_model());
}

TEST(ObservationSet, CollapsesExactDuplicates) {
  const ObservationSet obs({{"E", true}, {"E", true}, {"F", false}});
  EXPECT_EQ(obs.literals().size(), 2u);
  EXPECT_FALSE(obs.all_positive());
}

TEST(ObservationSet, ValidationFlagsProblems) {
  const auto model = load_fixture("constrained.fdl").model;
  EXPECT_TRUE(validate_observations(model, ObservationSet({{"E", true}})).empty());

  const auto contradiction =
      validate_observations(model, ObservationSet({{"E", true}, {"E", false}}));
  ASSERT_EQ(contradiction.size(), 1u);
  EXPECT_EQ(contradiction[0].kind, FindingKind::contradictory_observation);

  const auto unknown = validate_observations(model, ObservationSet({{"X", true}}));
  ASSERT_EQ(unknown.size(), 1u);
  EXPECT_EQ(unknown[0].kind, FindingKind::unknown_observable);

  const auto free_obs = validate_observations(model, ObservationSet({{"Smoke", true}}));
  ASSERT_EQ(free_obs.size(), 1u);
  EXPECT_EQ(free_obs[0].kind, FindingKind::free_observable_observed);
}

TEST(Interpretation, IndexPutsFirstHypothesisAtTheTopBit) {
  // Only A faulty: A's bit is clear, every other bit set.
  EXPECT_EQ(Interpretation(0b0001, 4).index(), 7u);
  EXPECT_EQ(Interpretation(0b0000, 4).index(), 15u);
  EXPECT_EQ(Interpretation(0b1111, 4).index(), 0u);
  // B and C faulty.
  EXPECT_EQ(Interpretation(0b0110, 4).index(), 9u);
  for (std::uint64_t i = 0; i < 16; ++i) {
    EXPECT_EQ(Interpretation::from_index(i, 4).index(), i);
  }
  EXPECT_EQ(Interpretation(0b0110, 4).fault_count(), 2u);
  EXPECT_TRUE(Interpretation(0b0110, 4).is_faulty(1));
  EXPECT_FALSE(Interpretation(0b0110, 4).is_faulty(0));
}

TEST(Treatments, ValidationChecksTargetsAndUtilities) {
  auto bundle = load_fixture("independent_repairs.fdl");
  bundle.model = load_fixture("circuit4.fdl").model;
  EXPECT_TRUE(validate_treatments(bundle.model, bundle.treatments, &bundle.utility).empty());

  UtilityModel utility = bundle.utility;
  utility.additive["FixZ"] = {};
  utility.additive["FixA"].treat_ok = std::numeric_limits<double>::infinity();
  std::vector<TreatmentAction> treatments = bundle.treatments;
  treatments.push_back({"FixQ", "Q"});
  std::vector<FindingKind> kinds;
  for (const auto& f : validate_treatments(bundle.model, treatments, &utility))
    kinds.push_back(f.kind);
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), FindingKind::unknown_treatment), kinds.end());
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), FindingKind::unknown_hypothesis), kinds.end());
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), FindingKind::non_finite_utility), kinds.end());
}

}  // namespace
}  // namespace diagnoscope
