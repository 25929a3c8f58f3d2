#include "diagnoscope/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

namespace diagnoscope {

namespace {

constexpr double kUtilityTieTolerance = 1e-12;

std::size_t hypothesis_bit(const std::vector<std::string>& hypotheses, const std::string& id) {
  const auto it = std::find(hypotheses.begin(), hypotheses.end(), id);
  if (it == hypotheses.end()) {
    throw DiagnosisError(ErrorCode::unknown_atom, "unknown atom '" + id + "' in utility model");
  }
  return static_cast<std::size_t>(it - hypotheses.begin());
}

const TreatmentAction& find_treatment(const DecisionProblem& problem, const std::string& id) {
  for (const auto& t : problem.treatments) {
    if (t.id == id) return t;
  }
  throw DiagnosisError(ErrorCode::invalid_argument, "unknown treatment '" + id + "'");
}

bool contains(const TreatmentSet& tau, const std::string& id) {
  return std::find(tau.begin(), tau.end(), id) != tau.end();
}

void check_declared(const DecisionProblem& problem, const TreatmentSet& tau) {
  for (const auto& id : tau) find_treatment(problem, id);
}

double pick(const AdditiveUtility& u, bool applied, bool faulty) {
  if (applied) return faulty ? u.treat_faulty : u.treat_ok;
  return faulty ? u.skip_faulty : u.skip_ok;
}

double additive_expectation(const AdditiveUtility& u, bool applied, double p_faulty) {
  return p_faulty * pick(u, applied, true) + (1.0 - p_faulty) * pick(u, applied, false);
}

bool given_matches(const JointUtility& entry, const TreatmentSet& tau) {
  return std::all_of(entry.given.begin(), entry.given.end(), [&](const TreatmentLiteral& l) {
    return contains(tau, l.treatment) == l.applied;
  });
}

Formula when_formula(const JointUtility& entry) {
  std::vector<Formula> parts;
  for (const auto& l : entry.when) {
    auto atom = Formula::atom(l.hypothesis);
    parts.push_back(l.positive ? std::move(atom) : Formula::negation(std::move(atom)));
  }
  return Formula::conjunction(std::move(parts));
}

bool lexicographically_less(const TreatmentSet& a, const TreatmentSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

double state_utility(const DecisionProblem& problem, const std::vector<std::string>& hypotheses,
                     const Interpretation& interp, const TreatmentSet& tau) {
  double total = 0.0;
  for (const auto& [id, entry] : problem.utility.additive) {
    const TreatmentAction& action = find_treatment(problem, id);
    const bool faulty = interp.is_faulty(hypothesis_bit(hypotheses, action.target));
    total += pick(entry, contains(tau, id), faulty);
  }
  for (const auto& entry : problem.utility.joint) {
    if (!given_matches(entry, tau)) continue;
    const bool state_matches =
        std::all_of(entry.when.begin(), entry.when.end(), [&](const HypothesisLiteral& l) {
          return interp.is_faulty(hypothesis_bit(hypotheses, l.hypothesis)) == l.positive;
        });
    if (state_matches) total += entry.value;
  }
  return total;
}

double expected_utility(const PosteriorTable& table, const DecisionProblem& problem,
                        const TreatmentSet& tau) {
  check_declared(problem, tau);
  double total = 0.0;
  for (const auto& entry : table.entries()) {
    if (entry.posterior == 0.0) continue;
    total +=
        entry.posterior * state_utility(problem, table.hypotheses(), entry.interpretation, tau);
  }
  return total;
}

double expected_utility(const FaultModel& model, const ObservationSet& observations,
                        const DecisionProblem& problem, const TreatmentSet& tau,
                        const EnumerationLimits& limits) {
  return expected_utility(posterior_table(model, observations, limits), problem, tau);
}

TreatmentDecision optimal_treatment(const PosteriorTable& table, const DecisionProblem& problem,
                                    const EnumerationLimits& limits) {
  std::vector<std::string> ids;
  for (const auto& t : problem.treatments) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const std::size_t l = ids.size();
  if (l > limits.max_treatments || l >= 63) {
    throw DiagnosisError(ErrorCode::treatment_space_too_large,
                         "treatment space too large: " + std::to_string(l) +
                             " treatments exceed the cap of " +
                             std::to_string(limits.max_treatments));
  }

  // Expected utility is linear in the posterior, so each additive entry
  // only needs its target's marginal and each joint entry the probability
  // of its state pattern.
  struct Contribution {
    double applied = 0.0;
    double skipped = 0.0;
  };
  std::vector<Contribution> additive(l);
  for (std::size_t i = 0; i < l; ++i) {
    const auto it = problem.utility.additive.find(ids[i]);
    if (it == problem.utility.additive.end()) continue;
    const double p = marginal(table, Formula::atom(find_treatment(problem, ids[i]).target));
    additive[i] = {additive_expectation(it->second, true, p),
                   additive_expectation(it->second, false, p)};
  }
  struct JointTerm {
    double weight;
    std::uint64_t require_in;
    std::uint64_t require_out;
  };
  std::vector<JointTerm> joint;
  for (const auto& entry : problem.utility.joint) {
    JointTerm term{entry.value * marginal(table, when_formula(entry)), 0, 0};
    for (const auto& literal : entry.given) {
      const auto it = std::lower_bound(ids.begin(), ids.end(), literal.treatment);
      if (it == ids.end() || *it != literal.treatment) {
        throw DiagnosisError(ErrorCode::invalid_argument,
                             "unknown treatment '" + literal.treatment + "'");
      }
      const std::uint64_t bit = std::uint64_t{1} << (it - ids.begin());
      (literal.applied ? term.require_in : term.require_out) |= bit;
    }
    joint.push_back(term);
  }

  std::optional<TreatmentDecision> best;
  const std::uint64_t count = std::uint64_t{1} << l;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double eu = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      eu += ((mask >> i) & 1U) ? additive[i].applied : additive[i].skipped;
    }
    for (const auto& term : joint) {
      if ((mask & term.require_in) == term.require_in && (mask & term.require_out) == 0) {
        eu += term.weight;
      }
    }
    TreatmentSet chosen;
    for (std::size_t i = 0; i < l; ++i) {
      if ((mask >> i) & 1U) chosen.push_back(ids[i]);
    }
    const bool better = !best || eu > best->expected_utility + kUtilityTieTolerance ||
                        (eu >= best->expected_utility - kUtilityTieTolerance &&
                         lexicographically_less(chosen, best->chosen));
    if (better) best = TreatmentDecision{std::move(chosen), eu, {}};
  }

  for (std::size_t i = 0; i < l; ++i) {
    const bool applied = contains(best->chosen, ids[i]);
    best->per_treatment_breakdown[ids[i]] = applied ? additive[i].applied : additive[i].skipped;
  }
  return *best;
}

TreatmentDecision optimal_treatment(const FaultModel& model, const ObservationSet& observations,
                                    const DecisionProblem& problem,
                                    const EnumerationLimits& limits) {
  return optimal_treatment(posterior_table(model, observations, limits), problem, limits);
}

double additive_fix_threshold(const AdditiveUtility& entry) {
  // Treating wins iff p * gain_if_faulty + (1 - p) * gain_if_ok > 0.
  const double gain_if_faulty = entry.treat_faulty - entry.skip_faulty;
  const double gain_if_ok = entry.treat_ok - entry.skip_ok;
  const double slope = gain_if_faulty - gain_if_ok;
  if (!(slope > 0.0)) {
    if (gain_if_faulty <= 0.0 && gain_if_ok <= 0.0) {
      throw ThresholdError(Dominance::never_treat,
                           "no finite threshold: treating is dominated by not treating");
    }
    if (gain_if_faulty > 0.0 && gain_if_ok > 0.0) {
      throw ThresholdError(Dominance::always_treat,
                           "no finite threshold: treating dominates not treating");
    }
    throw ThresholdError(Dominance::inverted,
                         "no finite threshold: treating pays off only when the target is "
                         "unlikely to be faulty");
  }
  const double threshold = -gain_if_ok / slope;
  if (threshold >= 1.0) {
    throw ThresholdError(Dominance::never_treat,
                         "no finite threshold: treating is dominated by not treating");
  }
  if (threshold < 0.0) {
    throw ThresholdError(Dominance::always_treat,
                         "no finite threshold: treating dominates not treating");
  }
  return threshold + 0.0;  // no negative zero
}

}  // namespace diagnoscope
