#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diagnoscope/decision.hpp"
#include "diagnoscope/logic.hpp"
#include "diagnoscope/model.hpp"
#include "diagnoscope/probability.hpp"

namespace diagnoscope {

enum class Strategy {
  single_fault,
  posterior,
  mpe,
  consistency,
  abductive,
};

inline constexpr Strategy kAllStrategies[] = {Strategy::single_fault, Strategy::posterior,
                                              Strategy::mpe, Strategy::consistency,
                                              Strategy::abductive};

std::string_view to_string(Strategy strategy) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;

struct RankedCandidate {
  /// diagnosis.probability always equals score.
  Diagnosis diagnosis;
  double score = 0.0;
  /// Set for candidates that are whole interpretations (mpe, single-fault).
  std::optional<Interpretation> interpretation;
};

struct RankedDiagnoses {
  Strategy strategy = Strategy::posterior;
  /// Non-increasing by score.
  std::vector<RankedCandidate> candidates;
  /// Candidates within the tie epsilon of the top score.
  std::vector<RankedCandidate> ties;

  const RankedCandidate* leader() const {
    return candidates.empty() ? nullptr : &candidates.front();
  }
};

/// Hypotheses h for which "exactly h is faulty" is possible, scored by the
/// posterior of that interpretation. An empty list means no single fault
/// accounts for the observations.
RankedDiagnoses diagnose_single_fault(const PosteriorTable& table);
/// Every hypothesis, scored by its posterior marginal.
RankedDiagnoses diagnose_posterior(const PosteriorTable& table);
/// Interpretations with nonzero posterior, most probable first.
RankedDiagnoses diagnose_mpe(const PosteriorTable& table);
/// Minimal consistency-based fault sets, each scored by the posterior of
/// the positive conjunction of its members.
RankedDiagnoses diagnose_consistency(const FaultModel& model, const PosteriorTable& table,
                                     const ObservationSet& observations,
                                     const EnumerationLimits& limits = {});
/// Minimal abductive explanations, scored like diagnose_consistency.
RankedDiagnoses diagnose_abductive(const FaultModel& model, const PosteriorTable& table,
                                   const ObservationSet& observations,
                                   const EnumerationLimits& limits = {});

RankedDiagnoses diagnose(Strategy strategy, const FaultModel& model,
                         const ObservationSet& observations, const EnumerationLimits& limits = {});
RankedDiagnoses diagnose(Strategy strategy, const FaultModel& model, const PosteriorTable& table,
                         const ObservationSet& observations, const EnumerationLimits& limits = {});

/// Positive conjunction of the given hypotheses (true when empty).
Formula fault_conjunction(const std::vector<std::string>& faulty);

struct StrategyOutcome {
  Strategy strategy;
  std::optional<RankedDiagnoses> ranking;
  /// Set when the strategy failed; ranking is then empty.
  std::optional<std::string> error;

  /// Fault set of the top candidate, if there is one.
  std::optional<std::vector<std::string>> leader() const;
};

struct TreatmentOutcome {
  std::optional<TreatmentDecision> decision;
  std::optional<std::string> error;

  /// Targets of the chosen treatments, in hypothesis declaration order.
  std::vector<std::string> treated_hypotheses;
};

struct StrategyDisagreement {
  std::string first;
  std::string second;
};

struct StrategyReport {
  std::optional<double> evidence_probability;
  std::vector<StrategyOutcome> outcomes;
  std::optional<TreatmentOutcome> treatment;
  /// Every pair of strategies (in run order) whose leaders' fault sets differ.
  std::vector<StrategyDisagreement> disagreements;
  /// Strategy failures and strategies with no leader, as readable lines.
  std::vector<std::string> findings;

  bool unanimous() const noexcept { return disagreements.empty(); }
  const StrategyOutcome* outcome(Strategy strategy) const;
};

/// Runs every strategy on the same posterior table and compares leaders.
/// Leaders are projected to fault sets: an interpretation to its faulty
/// hypotheses, a posterior leader to itself, a treatment decision to the
/// hypotheses it treats.
StrategyReport compare_strategies(const FaultModel& model, const ObservationSet& observations,
                                  const DecisionProblem* decision = nullptr,
                                  const EnumerationLimits& limits = {});

}  // namespace diagnoscope
