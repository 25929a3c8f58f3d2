#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "diagnoscope/formula.hpp"
#include "diagnoscope/logic.hpp"
#include "diagnoscope/model.hpp"

namespace diagnoscope {

inline constexpr double kDefaultTieEpsilon = 1e-9;

struct PosteriorEntry {
  std::uint64_t index = 0;
  Interpretation interpretation;
  double posterior = 0.0;

  friend bool operator==(const PosteriorEntry&, const PosteriorEntry&) = default;
};

/// Posterior distribution over every interpretation of a model given a set
/// of observations. Entries are stored in index order, so entries()[i] is
/// the row with index i. Rows that violate the observations or the facts
/// carry exactly 0.
class PosteriorTable {
 public:
  std::span<const PosteriorEntry> entries() const noexcept { return entries_; }
  const PosteriorEntry& at(std::uint64_t index) const { return entries_.at(index); }
  double evidence_probability() const noexcept { return evidence_probability_; }
  const CompletedTheory& theory() const noexcept { return *theory_; }
  const std::vector<std::string>& hypotheses() const noexcept { return theory_->hypotheses(); }

 private:
  friend PosteriorTable posterior_table(const FaultModel&, const ObservationSet&,
                                        const EnumerationLimits&);

  std::shared_ptr<const CompletedTheory> theory_;
  std::vector<PosteriorEntry> entries_;
  double evidence_probability_ = 0.0;
};

/// Product of per-hypothesis priors (prior if faulty, 1 - prior otherwise).
double joint_prior(const FaultModel& model, const Interpretation& interp);

/// Throws DiagnosisError(zero_probability) when no interpretation with
/// nonzero prior satisfies the observations and facts.
PosteriorTable posterior_table(const FaultModel& model, const ObservationSet& observations,
                               const EnumerationLimits& limits = {});

/// Posterior probability of `w`: the sum over rows in which `w` holds.
double marginal(const PosteriorTable& table, const Formula& w);

/// Every row whose posterior is within `tie_epsilon` of the maximum, in
/// index order.
std::vector<PosteriorEntry> most_likely_interpretations(const PosteriorTable& table,
                                                        double tie_epsilon = kDefaultTieEpsilon);

/// Shortest prefix of the rows sorted by descending posterior (ties by
/// index) whose cumulative posterior reaches `mass`. Requires 0 < mass <= 1.
std::vector<PosteriorEntry> covering_mass_set(const PosteriorTable& table, double mass);

}  // namespace diagnoscope
