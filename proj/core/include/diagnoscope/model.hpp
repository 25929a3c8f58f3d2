#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diagnoscope/formula.hpp"

namespace diagnoscope {

/// An atomic fault proposition with an independent prior of being true.
struct Hypothesis {
  std::string id;
  double prior = 0.0;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// An observable effect. A free observable has no defining rules and can
/// therefore never be constrained by the model.
struct ObservableVar {
  std::string id;
  bool free = false;

  friend bool operator==(const ObservableVar&, const ObservableVar&) = default;
};

/// `body[0] & body[1] & ... => head`. An empty body means the head always holds.
struct CausalRule {
  std::vector<std::string> body;
  std::string head;

  Formula body_formula() const;

  friend bool operator==(const CausalRule&, const CausalRule&) = default;
};

/// Hypotheses, observables, causal rules and hard constraints over
/// hypotheses. Immutable once built; declaration order of hypotheses fixes
/// every tie-break and the interpretation indexing used downstream.
///
/// Construction never rejects a model. Structural problems are reported
/// by validate_model() so that a broken model can still be inspected.
class FaultModel {
 public:
  FaultModel() = default;
  FaultModel(std::vector<Hypothesis> hypotheses, std::vector<ObservableVar> observables,
             std::vector<CausalRule> rules, std::vector<Formula> extra_facts = {});

  const std::vector<Hypothesis>& hypotheses() const noexcept { return hypotheses_; }
  const std::vector<ObservableVar>& observables() const noexcept { return observables_; }
  const std::vector<CausalRule>& rules() const noexcept { return rules_; }
  const std::vector<Formula>& extra_facts() const noexcept { return extra_facts_; }

  std::size_t hypothesis_count() const noexcept { return hypotheses_.size(); }

  /// Position of the first hypothesis with this id.
  std::optional<std::size_t> hypothesis_index(std::string_view id) const;
  const ObservableVar* find_observable(std::string_view id) const;
  bool is_hypothesis(std::string_view id) const { return hypothesis_index(id).has_value(); }
  bool is_observable(std::string_view id) const { return find_observable(id) != nullptr; }

  /// Copy with one prior replaced. Unknown ids leave the copy unchanged.
  FaultModel with_prior(std::string_view id, double prior) const;
  /// Copy with an extra hypothesis appended after the existing ones.
  FaultModel with_hypothesis(Hypothesis hypothesis) const;

  friend bool operator==(const FaultModel& a, const FaultModel& b);

 private:
  std::vector<Hypothesis> hypotheses_;
  std::vector<ObservableVar> observables_;
  std::vector<CausalRule> rules_;
  std::vector<Formula> extra_facts_;
  std::map<std::string, std::size_t, std::less<>> hypothesis_lookup_;
  std::map<std::string, std::size_t, std::less<>> observable_lookup_;
};

struct ObservationLiteral {
  std::string observable;
  bool positive = true;

  friend bool operator==(const ObservationLiteral&, const ObservationLiteral&) = default;
};

/// Conjunction of observed literals. Exact duplicates are collapsed; a
/// literal observed with both polarities is kept and flagged by validation.
class ObservationSet {
 public:
  ObservationSet() = default;
  explicit ObservationSet(std::vector<ObservationLiteral> literals);

  const std::vector<ObservationLiteral>& literals() const noexcept { return literals_; }
  bool empty() const noexcept { return literals_.empty(); }
  bool all_positive() const;
  Formula as_formula() const;

  friend bool operator==(const ObservationSet&, const ObservationSet&) = default;

 private:
  std::vector<ObservationLiteral> literals_;
};

struct HypothesisLiteral {
  std::string hypothesis;
  bool positive = true;

  friend bool operator==(const HypothesisLiteral&, const HypothesisLiteral&) = default;
};

/// Total truth assignment over a model's hypotheses, stored as a bitmask
/// where bit k is set iff hypothesis k (declaration order) is faulty.
///
/// The external index numbers interpretations so that the first declared
/// hypothesis is the most significant bit and a set bit means "normal":
/// index 0 is everything faulty, index 2^m - 1 is everything normal.
class Interpretation {
 public:
  Interpretation() = default;
  Interpretation(std::uint64_t faulty_mask, std::size_t size);

  static Interpretation from_index(std::uint64_t index, std::size_t size);

  std::uint64_t faulty_mask() const noexcept { return faulty_; }
  std::size_t size() const noexcept { return size_; }
  std::uint64_t index() const noexcept;
  bool is_faulty(std::size_t hypothesis) const noexcept { return (faulty_ >> hypothesis) & 1U; }
  std::size_t fault_count() const noexcept;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;

 private:
  std::uint64_t faulty_ = 0;
  std::size_t size_ = 0;
};

/// A set of hypotheses asserted faulty, in declaration order, with the
/// posterior probability of their (positive) conjunction.
struct Diagnosis {
  std::vector<std::string> faulty;
  double probability = 0.0;

  friend bool operator==(const Diagnosis&, const Diagnosis&) = default;
};

struct TreatmentAction {
  std::string id;
  std::string target;

  friend bool operator==(const TreatmentAction&, const TreatmentAction&) = default;
};

/// Utility of one treatment, split by whether it is applied and whether
/// its target is actually faulty.
struct AdditiveUtility {
  double treat_faulty = 0.0;
  double treat_ok = 0.0;
  double skip_faulty = 0.0;
  double skip_ok = 0.0;

  friend bool operator==(const AdditiveUtility&, const AdditiveUtility&) = default;
};

/// `applied == false` matches treatment sets that do not contain the id.
struct TreatmentLiteral {
  std::string treatment;
  bool applied = true;

  friend bool operator==(const TreatmentLiteral&, const TreatmentLiteral&) = default;
};

/// Value added when every `when` literal holds in the true state and every
/// `given` literal holds for the chosen treatment set. Empty lists match
/// unconditionally.
struct JointUtility {
  std::vector<HypothesisLiteral> when;
  std::vector<TreatmentLiteral> given;
  double value = 0.0;

  friend bool operator==(const JointUtility&, const JointUtility&) = default;
};

struct UtilityModel {
  std::map<std::string, AdditiveUtility, std::less<>> additive;
  std::vector<JointUtility> joint;

  friend bool operator==(const UtilityModel&, const UtilityModel&) = default;
};

enum class FindingKind {
  prior_out_of_range,
  duplicate_id,
  unknown_observable,
  unknown_hypothesis,
  undefined_observable,
  free_observable_with_rules,
  fact_mentions_non_hypothesis,
  contradictory_observation,
  free_observable_observed,
  unknown_treatment,
  non_finite_utility,
};

struct ValidationFinding {
  FindingKind kind;
  /// The offending id (or the empty string when not tied to one).
  std::string subject;
  std::string message;

  friend bool operator==(const ValidationFinding&, const ValidationFinding&) = default;
};

std::vector<ValidationFinding> validate_model(const FaultModel& model);

/// Observation literals must name declared, rule-defined observables and
/// must not contradict each other.
std::vector<ValidationFinding> validate_observations(const FaultModel& model,
                                                     const ObservationSet& observations);

std::vector<ValidationFinding> validate_treatments(const FaultModel& model,
                                                   const std::vector<TreatmentAction>& treatments,
                                                   const UtilityModel* utility);

}  // namespace diagnoscope
