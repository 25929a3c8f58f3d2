#pragma once

#include <map>
#include <string>
#include <vector>

#include "diagnoscope/error.hpp"
#include "diagnoscope/logic.hpp"
#include "diagnoscope/model.hpp"
#include "diagnoscope/probability.hpp"

namespace diagnoscope {

/// Treatment ids, sorted and unique.
using TreatmentSet = std::vector<std::string>;

/// The available repair actions together with the utility of outcomes.
struct DecisionProblem {
  std::vector<TreatmentAction> treatments;
  UtilityModel utility;
};

struct TreatmentDecision {
  TreatmentSet chosen;
  double expected_utility = 0.0;
  /// Expected additive utility of each declared treatment under `chosen`
  /// (applied or not). Joint entries are not attributed to treatments.
  std::map<std::string, double, std::less<>> per_treatment_breakdown;
};

/// Utility of applying `tau` when the true state is `interp`.
double state_utility(const DecisionProblem& problem, const std::vector<std::string>& hypotheses,
                     const Interpretation& interp, const TreatmentSet& tau);

/// Posterior expectation of state_utility(), summed row by row.
double expected_utility(const PosteriorTable& table, const DecisionProblem& problem,
                        const TreatmentSet& tau);
double expected_utility(const FaultModel& model, const ObservationSet& observations,
                        const DecisionProblem& problem, const TreatmentSet& tau,
                        const EnumerationLimits& limits = {});

/// Exhaustive search over all 2^l treatment sets. Ties go to the smallest
/// set, then to the lexicographically smallest id list.
TreatmentDecision optimal_treatment(const PosteriorTable& table, const DecisionProblem& problem,
                                    const EnumerationLimits& limits = {});
TreatmentDecision optimal_treatment(const FaultModel& model, const ObservationSet& observations,
                                    const DecisionProblem& problem,
                                    const EnumerationLimits& limits = {});

enum class Dominance {
  always_treat,  // treating wins even when the target is certainly fine
  never_treat,   // treating never wins, even when the target is certainly faulty
  inverted,      // treating wins only when the target is unlikely to be faulty
};

class ThresholdError : public DiagnosisError {
 public:
  ThresholdError(Dominance dominance, const std::string& message)
      : DiagnosisError(ErrorCode::no_finite_threshold, message), dominance_(dominance) {}

  Dominance dominance() const noexcept { return dominance_; }

 private:
  Dominance dominance_;
};

/// Posterior probability t of the target being faulty above which treating
/// has strictly higher expected utility than not treating. Throws
/// ThresholdError when no t in [0, 1) separates the two choices.
double additive_fix_threshold(const AdditiveUtility& entry);

}  // namespace diagnoscope
