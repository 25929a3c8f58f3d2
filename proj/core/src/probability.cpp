#include "diagnoscope/probability.hpp"

#include <algorithm>
#include <cmath>

#include "diagnoscope/error.hpp"

namespace diagnoscope {

namespace {

// Cumulative sums of normalized rows can fall short of 1 by rounding.
constexpr double kMassSlack = 1e-9;

}  // namespace

double joint_prior(const FaultModel& model, const Interpretation& interp) {
  // Factors are multiplied in sorted order so that interpretations with the
  // same multiset of factors get bit-identical priors and tie exactly.
  const auto& hyps = model.hypotheses();
  std::vector<double> factors;
  factors.reserve(hyps.size());
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    factors.push_back(interp.is_faulty(k) ? hyps[k].prior : 1.0 - hyps[k].prior);
  }
  std::sort(factors.begin(), factors.end());
  double p = 1.0;
  for (double f : factors) p *= f;
  return p;
}

PosteriorTable posterior_table(const FaultModel& model, const ObservationSet& observations,
                               const EnumerationLimits& limits) {
  const std::size_t m = model.hypothesis_count();
  check_hypothesis_cap(m, limits);

  PosteriorTable table;
  table.theory_ = std::make_shared<const CompletedTheory>(clark_completion(model));
  const CompiledFormula obs = table.theory_->compile(observations);
  const CompiledFormula& facts = table.theory_->facts();

  const std::uint64_t count = std::uint64_t{1} << m;
  table.entries_.reserve(count);
  double evidence = 0.0;
  for (std::uint64_t index = 0; index < count; ++index) {
    const Interpretation interp = Interpretation::from_index(index, m);
    const bool possible = facts.evaluate(interp) && obs.evaluate(interp);
    const double weight = possible ? joint_prior(model, interp) : 0.0;
    evidence += weight;
    table.entries_.push_back({index, interp, weight});
  }
  if (!(evidence > 0.0)) {
    throw DiagnosisError(ErrorCode::zero_probability, "observation has zero probability");
  }
  for (auto& entry : table.entries_) entry.posterior /= evidence;
  table.evidence_probability_ = evidence;
  return table;
}

double marginal(const PosteriorTable& table, const Formula& w) {
  const CompiledFormula compiled = table.theory().compile(w);
  double sum = 0.0;
  for (const auto& entry : table.entries()) {
    if (entry.posterior != 0.0 && compiled.evaluate(entry.interpretation)) sum += entry.posterior;
  }
  return sum;
}

std::vector<PosteriorEntry> most_likely_interpretations(const PosteriorTable& table,
                                                        double tie_epsilon) {
  double best = 0.0;
  for (const auto& entry : table.entries()) best = std::max(best, entry.posterior);
  std::vector<PosteriorEntry> out;
  for (const auto& entry : table.entries()) {
    if (entry.posterior >= best - tie_epsilon) out.push_back(entry);
  }
  return out;
}

std::vector<PosteriorEntry> covering_mass_set(const PosteriorTable& table, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) {
    throw DiagnosisError(ErrorCode::invalid_argument, "covering mass must lie in (0, 1]");
  }
  std::vector<PosteriorEntry> sorted(table.entries().begin(), table.entries().end());
  std::stable_sort(
      sorted.begin(), sorted.end(),
      [](const PosteriorEntry& a, const PosteriorEntry& b) { return a.posterior > b.posterior; });
  std::vector<PosteriorEntry> out;
  double cumulative = 0.0;
  for (auto& entry : sorted) {
    cumulative += entry.posterior;
    out.push_back(std::move(entry));
    if (cumulative >= mass - kMassSlack) break;
  }
  return out;
}

}  // namespace diagnoscope
