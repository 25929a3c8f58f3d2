#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diagnoscope/formula.hpp"
#include "diagnoscope/model.hpp"

namespace diagnoscope {

/// Caps on exhaustive enumeration. Every engine enumerates 2^m hypothesis
/// assignments (or 2^l treatment sets); exceeding a cap is an error rather
/// than a silent slowdown.
struct EnumerationLimits {
  std::size_t max_hypotheses = 20;
  std::size_t max_treatments = 20;
};

/// A formula with hypothesis atoms resolved to bit positions and
/// observables replaced by their completion definitions.
class CompiledFormula {
 public:
  CompiledFormula();

  bool evaluate(std::uint64_t faulty_mask) const { return eval(root_, faulty_mask); }
  bool evaluate(const Interpretation& interp) const { return evaluate(interp.faulty_mask()); }

 private:
  friend class CompletedTheory;

  enum class Op : std::uint8_t {
    truth,
    falsity,
    variable,
    negation,
    conjunction,
    disjunction,
    implication,
    biconditional,
  };
  struct Node {
    Op op;
    std::uint32_t arg;    // variable bit, or first child slot
    std::uint32_t count;  // number of children
  };

  bool eval(std::uint32_t node, std::uint64_t mask) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> children_;
  std::uint32_t root_ = 0;
};

/// Clark completion of a fault model: each rule-defined observable is
/// equivalent to the disjunction of its rule bodies. Consistency-based and
/// abductive queries both run against this one theory.
class CompletedTheory {
 public:
  struct Definition {
    std::string observable;
    Formula formula;
  };

  const std::vector<std::string>& hypotheses() const noexcept { return hypotheses_; }
  std::size_t hypothesis_count() const noexcept { return hypotheses_.size(); }
  std::span<const Definition> definitions() const noexcept { return definitions_; }
  /// nullptr for free or undeclared observables.
  const Formula* definition(std::string_view observable) const;
  std::span<const Formula> extra_facts() const noexcept { return extra_facts_; }

  /// Throws DiagnosisError(unknown_atom) for undeclared atoms and
  /// DiagnosisError(undefined_observable) for free observables.
  CompiledFormula compile(const Formula& formula) const;
  CompiledFormula compile(const ObservationSet& observations) const;
  /// Conjunction of the model's extra facts.
  const CompiledFormula& facts() const noexcept { return facts_; }

 private:
  friend CompletedTheory clark_completion(const FaultModel& model);

  std::uint32_t compile_node(CompiledFormula& out, const Formula& formula) const;

  std::vector<std::string> hypotheses_;
  std::map<std::string, std::uint32_t, std::less<>> hypothesis_bits_;
  std::vector<Definition> definitions_;
  std::set<std::string, std::less<>> free_observables_;
  std::vector<Formula> extra_facts_;
  CompiledFormula facts_;
};

CompletedTheory clark_completion(const FaultModel& model);

/// Evaluates `formula` in `interp`, substituting completion definitions for
/// observables.
bool evaluate_formula(const CompletedTheory& theory, const Formula& formula,
                      const Interpretation& interp);

/// A set of hypothesis literals assumed together with the facts.
struct Scenario {
  std::vector<HypothesisLiteral> asserted;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

bool scenario_consistent(const CompletedTheory& theory, const Scenario& scenario,
                         const ObservationSet& observations, const EnumerationLimits& limits = {});

/// Throws DiagnosisError(inconsistent_scenario) when no extension of the
/// scenario satisfies the facts.
bool scenario_explains(const CompletedTheory& theory, const Scenario& scenario, const Formula& goal,
                       const EnumerationLimits& limits = {});

/// Inclusion-maximal consistent scenarios, i.e. every total assignment that
/// satisfies the facts, in interpretation-index order.
std::vector<Scenario> maximal_scenarios(const CompletedTheory& theory, const FaultModel& model,
                                        const EnumerationLimits& limits = {});

/// Subset-minimal fault sets whose "exactly these are faulty" interpretation
/// is consistent with facts and observations. Ordered by size, then
/// lexicographically by declaration order. Probabilities are left at 0.
std::vector<Diagnosis> consistency_diagnoses(const CompletedTheory& theory, const FaultModel& model,
                                             const ObservationSet& observations,
                                             const EnumerationLimits& limits = {});

/// Subset-minimal sets of hypotheses that, assumed true with everything
/// else left open, entail every observation. Only positive observations
/// are accepted.
std::vector<Diagnosis> abductive_explanations(const CompletedTheory& theory,
                                              const FaultModel& model,
                                              const ObservationSet& observations,
                                              const EnumerationLimits& limits = {});

/// Orders fault masks by cardinality, then lexicographically by the
/// positions of their set bits.
bool fault_mask_less(std::uint64_t a, std::uint64_t b) noexcept;

/// Hypothesis ids for the set bits of `mask`, in declaration order.
std::vector<std::string> fault_names(std::span<const std::string> hypotheses, std::uint64_t mask);

/// Throws DiagnosisError(hypothesis_space_too_large) when `count` exceeds the cap.
void check_hypothesis_cap(std::size_t count, const EnumerationLimits& limits);

}  // namespace diagnoscope
