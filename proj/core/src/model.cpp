#include "diagnoscope/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <utility>

namespace diagnoscope {

Formula CausalRule::body_formula() const {
  if (body.size() == 1) return Formula::atom(body.front());
  std::vector<Formula> atoms;
  atoms.reserve(body.size());
  for (const auto& id : body) atoms.push_back(Formula::atom(id));
  return Formula::conjunction(std::move(atoms));
}

FaultModel::FaultModel(std::vector<Hypothesis> hypotheses, std::vector<ObservableVar> observables,
                       std::vector<CausalRule> rules, std::vector<Formula> extra_facts)
    : hypotheses_(std::move(hypotheses)),
      observables_(std::move(observables)),
      rules_(std::move(rules)),
      extra_facts_(std::move(extra_facts)) {
  for (std::size_t i = 0; i < hypotheses_.size(); ++i) {
    hypothesis_lookup_.emplace(hypotheses_[i].id, i);
  }
  for (std::size_t i = 0; i < observables_.size(); ++i) {
    observable_lookup_.emplace(observables_[i].id, i);
  }
}

std::optional<std::size_t> FaultModel::hypothesis_index(std::string_view id) const {
  const auto it = hypothesis_lookup_.find(id);
  if (it == hypothesis_lookup_.end()) return std::nullopt;
  return it->second;
}

const ObservableVar* FaultModel::find_observable(std::string_view id) const {
  const auto it = observable_lookup_.find(id);
  return it == observable_lookup_.end() ? nullptr : &observables_[it->second];
}

FaultModel FaultModel::with_prior(std::string_view id, double prior) const {
  auto hypotheses = hypotheses_;
  for (auto& h : hypotheses) {
    if (h.id == id) h.prior = prior;
  }
  return FaultModel(std::move(hypotheses), observables_, rules_, extra_facts_);
}

FaultModel FaultModel::with_hypothesis(Hypothesis hypothesis) const {
  auto hypotheses = hypotheses_;
  hypotheses.push_back(std::move(hypothesis));
  return FaultModel(std::move(hypotheses), observables_, rules_, extra_facts_);
}

bool operator==(const FaultModel& a, const FaultModel& b) {
  return a.hypotheses_ == b.hypotheses_ && a.observables_ == b.observables_ &&
         a.rules_ == b.rules_ && a.extra_facts_ == b.extra_facts_;
}

ObservationSet::ObservationSet(std::vector<ObservationLiteral> literals) {
  for (auto& literal : literals) {
    if (std::find(literals_.begin(), literals_.end(), literal) == literals_.end()) {
      literals_.push_back(std::move(literal));
    }
  }
}

bool ObservationSet::all_positive() const {
  return std::all_of(literals_.begin(), literals_.end(),
                     [](const ObservationLiteral& l) { return l.positive; });
}

Formula ObservationSet::as_formula() const {
  std::vector<Formula> parts;
  parts.reserve(literals_.size());
  for (const auto& literal : literals_) {
    auto atom = Formula::atom(literal.observable);
    parts.push_back(literal.positive ? std::move(atom) : Formula::negation(std::move(atom)));
  }
  return Formula::conjunction(std::move(parts));
}

Interpretation::Interpretation(std::uint64_t faulty_mask, std::size_t size)
    : faulty_(faulty_mask), size_(size) {}

Interpretation Interpretation::from_index(std::uint64_t index, std::size_t size) {
  std::uint64_t faulty = 0;
  for (std::size_t k = 0; k < size; ++k) {
    const bool normal = (index >> (size - 1 - k)) & 1U;
    if (!normal) faulty |= std::uint64_t{1} << k;
  }
  return Interpretation(faulty, size);
}

std::uint64_t Interpretation::index() const noexcept {
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < size_; ++k) {
    if (!is_faulty(k)) index |= std::uint64_t{1} << (size_ - 1 - k);
  }
  return index;
}

std::size_t Interpretation::fault_count() const noexcept {
  return static_cast<std::size_t>(std::popcount(faulty_));
}

namespace {

std::string format_number(double value) {
  std::string text = std::to_string(value);
  while (!text.empty() && text.back() == '0') text.pop_back();
  if (!text.empty() && text.back() == '.') text.pop_back();
  return text;
}

}  // namespace

std::vector<ValidationFinding> validate_model(const FaultModel& model) {
  std::vector<ValidationFinding> findings;
  const auto add = [&](FindingKind kind, const std::string& subject, std::string message) {
    findings.push_back({kind, subject, std::move(message)});
  };

  std::set<std::string, std::less<>> seen;
  for (const auto& h : model.hypotheses()) {
    if (!seen.insert(h.id).second) {
      add(FindingKind::duplicate_id, h.id, "duplicate hypothesis id '" + h.id + "'");
    }
    if (!std::isfinite(h.prior) || h.prior < 0.0 || h.prior > 1.0) {
      add(FindingKind::prior_out_of_range, h.id,
          "prior out of range: '" + h.id + "' has prior " + format_number(h.prior));
    }
  }

  std::set<std::string, std::less<>> observable_ids;
  for (const auto& o : model.observables()) {
    if (model.is_hypothesis(o.id)) {
      add(FindingKind::duplicate_id, o.id,
          "observable '" + o.id + "' shares its id with a hypothesis");
    } else if (!observable_ids.insert(o.id).second) {
      add(FindingKind::duplicate_id, o.id, "duplicate observable id '" + o.id + "'");
    }
  }

  std::map<std::string, std::size_t, std::less<>> rules_per_head;
  for (const auto& rule : model.rules()) {
    if (!observable_ids.contains(rule.head)) {
      add(FindingKind::unknown_observable, rule.head,
          "unknown observable '" + rule.head + "' in rule head");
    } else {
      ++rules_per_head[rule.head];
    }
    for (const auto& atom : rule.body) {
      if (!model.is_hypothesis(atom)) {
        add(FindingKind::unknown_hypothesis, atom,
            "unknown hypothesis '" + atom + "' in body of rule for '" + rule.head + "'");
      }
    }
  }

  for (const auto& o : model.observables()) {
    if (!observable_ids.contains(o.id)) continue;
    const bool has_rules = rules_per_head.contains(o.id);
    if (!has_rules && !o.free) {
      add(FindingKind::undefined_observable, o.id,
          "observable '" + o.id + "' has no rules and is not declared free");
    } else if (has_rules && o.free) {
      add(FindingKind::free_observable_with_rules, o.id,
          "observable '" + o.id + "' is declared free but has rules");
    }
  }

  for (const auto& fact : model.extra_facts()) {
    for (const auto& atom : fact.atoms()) {
      if (!model.is_hypothesis(atom)) {
        add(FindingKind::fact_mentions_non_hypothesis, atom,
            "fact mentions '" + atom + "', which is not a hypothesis");
      }
    }
  }
  return findings;
}

std::vector<ValidationFinding> validate_observations(const FaultModel& model,
                                                     const ObservationSet& observations) {
  std::vector<ValidationFinding> findings;
  std::map<std::string, bool, std::less<>> polarity;
  for (const auto& literal : observations.literals()) {
    const ObservableVar* observable = model.find_observable(literal.observable);
    if (observable == nullptr) {
      findings.push_back({FindingKind::unknown_observable, literal.observable,
                          "unknown observable '" + literal.observable + "' in observation"});
      continue;
    }
    if (observable->free) {
      findings.push_back({FindingKind::free_observable_observed, literal.observable,
                          "free observable '" + literal.observable +
                              "' is observed but nothing in the model constrains it"});
    }
    const auto [it, inserted] = polarity.emplace(literal.observable, literal.positive);
    if (!inserted && it->second != literal.positive) {
      findings.push_back(
          {FindingKind::contradictory_observation, literal.observable,
           "observable '" + literal.observable + "' is observed both true and false"});
    }
  }
  return findings;
}

std::vector<ValidationFinding> validate_treatments(const FaultModel& model,
                                                   const std::vector<TreatmentAction>& treatments,
                                                   const UtilityModel* utility) {
  std::vector<ValidationFinding> findings;
  std::set<std::string, std::less<>> ids;
  for (const auto& t : treatments) {
    if (!ids.insert(t.id).second) {
      findings.push_back(
          {FindingKind::duplicate_id, t.id, "duplicate treatment id '" + t.id + "'"});
    }
    if (!model.is_hypothesis(t.target)) {
      findings.push_back(
          {FindingKind::unknown_hypothesis, t.target,
           "treatment '" + t.id + "' targets unknown hypothesis '" + t.target + "'"});
    }
  }
  if (utility == nullptr) return findings;

  const auto check_value = [&](double v, const std::string& subject) {
    if (!std::isfinite(v)) {
      findings.push_back({FindingKind::non_finite_utility, subject,
                          "utility value for '" + subject + "' is not finite"});
    }
  };
  for (const auto& [id, entry] : utility->additive) {
    if (!ids.contains(id)) {
      findings.push_back(
          {FindingKind::unknown_treatment, id, "utility refers to unknown treatment '" + id + "'"});
    }
    for (double v : {entry.treat_faulty, entry.treat_ok, entry.skip_faulty, entry.skip_ok}) {
      check_value(v, id);
    }
  }
  for (const auto& entry : utility->joint) {
    for (const auto& literal : entry.when) {
      if (!model.is_hypothesis(literal.hypothesis)) {
        findings.push_back(
            {FindingKind::unknown_hypothesis, literal.hypothesis,
             "joint utility refers to unknown hypothesis '" + literal.hypothesis + "'"});
      }
    }
    for (const auto& literal : entry.given) {
      if (!ids.contains(literal.treatment)) {
        findings.push_back(
            {FindingKind::unknown_treatment, literal.treatment,
             "joint utility refers to unknown treatment '" + literal.treatment + "'"});
      }
    }
    check_value(entry.value, "joint");
  }
  return findings;
}

}  // namespace diagnoscope
