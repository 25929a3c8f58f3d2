#include "diagnoscope/strategy.hpp"

#include <algorithm>
#include <utility>

#include "diagnoscope/error.hpp"

namespace diagnoscope {

namespace {

// Sorts by descending score. Scores within the tie epsilon of the first
// member of their run keep the incoming (natural) order.
RankedDiagnoses rank(Strategy strategy, std::vector<RankedCandidate> candidates) {
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });
  for (std::size_t run = 0; run < order.size();) {
    std::size_t end = run + 1;
    while (end < order.size() &&
           candidates[order[end]].score >= candidates[order[run]].score - kDefaultTieEpsilon) {
      ++end;
    }
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(run),
              order.begin() + static_cast<std::ptrdiff_t>(end));
    run = end;
  }
  std::vector<RankedCandidate> sorted;
  sorted.reserve(candidates.size());
  for (std::size_t i : order) sorted.push_back(std::move(candidates[i]));
  candidates = std::move(sorted);
  RankedDiagnoses out{strategy, std::move(candidates), {}};
  if (!out.candidates.empty()) {
    const double top = out.candidates.front().score;
    for (const auto& c : out.candidates) {
      if (c.score >= top - kDefaultTieEpsilon) out.ties.push_back(c);
    }
  }
  return out;
}

RankedCandidate interpretation_candidate(const PosteriorTable& table, const PosteriorEntry& row) {
  return {{fault_names(table.hypotheses(), row.interpretation.faulty_mask()), row.posterior},
          row.posterior,
          row.interpretation};
}

RankedDiagnoses score_fault_sets(Strategy strategy, const PosteriorTable& table,
                                 std::vector<Diagnosis> diagnoses) {
  std::vector<RankedCandidate> candidates;
  candidates.reserve(diagnoses.size());
  for (auto& d : diagnoses) {
    d.probability = marginal(table, fault_conjunction(d.faulty));
    const double score = d.probability;
    candidates.push_back({std::move(d), score, std::nullopt});
  }
  return rank(strategy, std::move(candidates));
}

std::vector<std::string> in_declaration_order(const std::vector<std::string>& hypotheses,
                                              std::vector<std::string> ids) {
  const auto position = [&](const std::string& id) {
    return std::find(hypotheses.begin(), hypotheses.end(), id) - hypotheses.begin();
  };
  std::sort(ids.begin(), ids.end(),
            [&](const std::string& a, const std::string& b) { return position(a) < position(b); });
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::single_fault:
      return "single-fault";
    case Strategy::posterior:
      return "posterior";
    case Strategy::mpe:
      return "mpe";
    case Strategy::consistency:
      return "consistency";
    case Strategy::abductive:
      return "abductive";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Formula fault_conjunction(const std::vector<std::string>& faulty) {
  if (faulty.size() == 1) return Formula::atom(faulty.front());
  std::vector<Formula> atoms;
  atoms.reserve(faulty.size());
  for (const auto& id : faulty) atoms.push_back(Formula::atom(id));
  return Formula::conjunction(std::move(atoms));
}

RankedDiagnoses diagnose_single_fault(const PosteriorTable& table) {
  const std::size_t m = table.hypotheses().size();
  std::vector<RankedCandidate> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    const Interpretation only(std::uint64_t{1} << k, m);
    const PosteriorEntry& row = table.at(only.index());
    if (row.posterior > 0.0) candidates.push_back(interpretation_candidate(table, row));
  }
  return rank(Strategy::single_fault, std::move(candidates));
}

RankedDiagnoses diagnose_posterior(const PosteriorTable& table) {
  std::vector<RankedCandidate> candidates;
  for (const auto& id : table.hypotheses()) {
    const double p = marginal(table, Formula::atom(id));
    candidates.push_back({{{id}, p}, p, std::nullopt});
  }
  return rank(Strategy::posterior, std::move(candidates));
}

RankedDiagnoses diagnose_mpe(const PosteriorTable& table) {
  std::vector<RankedCandidate> candidates;
  for (const auto& row : table.entries()) {
    if (row.posterior > 0.0) candidates.push_back(interpretation_candidate(table, row));
  }
  return rank(Strategy::mpe, std::move(candidates));
}

RankedDiagnoses diagnose_consistency(const FaultModel& model, const PosteriorTable& table,
                                     const ObservationSet& observations,
                                     const EnumerationLimits& limits) {
  return score_fault_sets(Strategy::consistency, table,
                          consistency_diagnoses(table.theory(), model, observations, limits));
}

RankedDiagnoses diagnose_abductive(const FaultModel& model, const PosteriorTable& table,
                                   const ObservationSet& observations,
                                   const EnumerationLimits& limits) {
  return score_fault_sets(Strategy::abductive, table,
                          abductive_explanations(table.theory(), model, observations, limits));
}

RankedDiagnoses diagnose(Strategy strategy, const FaultModel& model, const PosteriorTable& table,
                         const ObservationSet& observations, const EnumerationLimits& limits) {
  switch (strategy) {
    case Strategy::single_fault:
      return diagnose_single_fault(table);
    case Strategy::posterior:
      return diagnose_posterior(table);
    case Strategy::mpe:
      return diagnose_mpe(table);
    case Strategy::consistency:
      return diagnose_consistency(model, table, observations, limits);
    case Strategy::abductive:
      return diagnose_abductive(model, table, observations, limits);
  }
  throw DiagnosisError(ErrorCode::invalid_argument, "unknown strategy");
}

RankedDiagnoses diagnose(Strategy strategy, const FaultModel& model,
                         const ObservationSet& observations, const EnumerationLimits& limits) {
  // Abduction rejects negative evidence before any enumeration happens.
  if (strategy == Strategy::abductive && !observations.all_positive()) {
    throw DiagnosisError(ErrorCode::negative_observation,
                         "abduction requires positive observations");
  }
  return diagnose(strategy, model, posterior_table(model, observations, limits), observations,
                  limits);
}

std::optional<std::vector<std::string>> StrategyOutcome::leader() const {
  if (!ranking || ranking->candidates.empty()) return std::nullopt;
  return ranking->candidates.front().diagnosis.faulty;
}

const StrategyOutcome* StrategyReport::outcome(Strategy strategy) const {
  for (const auto& o : outcomes) {
    if (o.strategy == strategy) return &o;
  }
  return nullptr;
}

StrategyReport compare_strategies(const FaultModel& model, const ObservationSet& observations,
                                  const DecisionProblem* decision,
                                  const EnumerationLimits& limits) {
  StrategyReport report;
  std::optional<PosteriorTable> table;
  std::string table_error;
  try {
    table = posterior_table(model, observations, limits);
    report.evidence_probability = table->evidence_probability();
  } catch (const DiagnosisError& e) {
    table_error = e.what();
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> leaders;
  for (Strategy s : kAllStrategies) {
    StrategyOutcome outcome{s, std::nullopt, std::nullopt};
    const std::string name(to_string(s));
    if (!table) {
      outcome.error = table_error;
    } else {
      try {
        outcome.ranking = diagnose(s, model, *table, observations, limits);
      } catch (const DiagnosisError& e) {
        outcome.error = e.what();
      }
    }
    if (outcome.error) {
      report.findings.push_back(name + ": " + *outcome.error);
    } else if (auto leader = outcome.leader()) {
      leaders.emplace_back(name, std::move(*leader));
    } else {
      report.findings.push_back(name + ": no candidate");
    }
    report.outcomes.push_back(std::move(outcome));
  }

  if (decision != nullptr) {
    TreatmentOutcome treatment;
    if (!table) {
      treatment.error = table_error;
    } else {
      try {
        treatment.decision = optimal_treatment(*table, *decision, limits);
        std::vector<std::string> targets;
        for (const auto& id : treatment.decision->chosen) {
          for (const auto& action : decision->treatments) {
            if (action.id == id) targets.push_back(action.target);
          }
        }
        treatment.treated_hypotheses = in_declaration_order(table->hypotheses(), targets);
        leaders.emplace_back("utility", treatment.treated_hypotheses);
      } catch (const DiagnosisError& e) {
        treatment.error = e.what();
      }
    }
    if (treatment.error) report.findings.push_back("utility: " + *treatment.error);
    report.treatment = std::move(treatment);
  }

  for (std::size_t i = 0; i < leaders.size(); ++i) {
    for (std::size_t j = i + 1; j < leaders.size(); ++j) {
      if (leaders[i].second != leaders[j].second) {
        report.disagreements.push_back({leaders[i].first, leaders[j].first});
      }
    }
  }
  return report;
}

}  // namespace diagnoscope
