#include "diagnoscope/logic.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "diagnoscope/error.hpp"

namespace diagnoscope {

namespace {

constexpr std::size_t kMaxRepresentableHypotheses = 62;

// Assignment masks with `care` bits fixed to `value` and the rest free.
template <typename Fn>
void for_each_extension(std::uint64_t care, std::uint64_t value, std::size_t m, Fn&& fn) {
  const std::uint64_t all = m == 0 ? 0 : (~std::uint64_t{0} >> (64 - m));
  const std::uint64_t open = all & ~care;
  std::uint64_t sub = 0;
  while (true) {
    if (!fn(value | sub)) return;
    if (sub == open) return;
    sub = (sub - open) & open;
  }
}

struct BoundScenario {
  std::uint64_t care = 0;
  std::uint64_t value = 0;
  bool contradictory = false;
};

BoundScenario bind(const CompletedTheory& theory, const Scenario& scenario) {
  BoundScenario out;
  const auto& hyps = theory.hypotheses();
  for (const auto& literal : scenario.asserted) {
    const auto it = std::find(hyps.begin(), hyps.end(), literal.hypothesis);
    if (it == hyps.end()) {
      throw DiagnosisError(ErrorCode::unknown_atom,
                           "unknown atom '" + literal.hypothesis + "' in scenario");
    }
    const std::uint64_t bit = std::uint64_t{1} << (it - hyps.begin());
    const std::uint64_t want = literal.positive ? bit : 0;
    if ((out.care & bit) && (out.value & bit) != want) out.contradictory = true;
    out.care |= bit;
    out.value |= want;
  }
  return out;
}

std::vector<std::uint64_t> minimal_masks(const std::vector<std::uint8_t>& valid, std::size_t m) {
  // below[s] = some subset of s (including s) is valid.
  std::vector<std::uint8_t> below = valid;
  const std::size_t n = valid.size();
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t s = 0; s < n; ++s) {
      if (s & bit) below[s] |= below[s ^ bit];
    }
  }
  std::vector<std::uint64_t> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!valid[s]) continue;
    bool minimal = true;
    for (std::size_t b = 0; b < m && minimal; ++b) {
      const std::size_t bit = std::size_t{1} << b;
      if ((s & bit) && below[s ^ bit]) minimal = false;
    }
    if (minimal) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), fault_mask_less);
  return out;
}

std::vector<Diagnosis> to_diagnoses(const CompletedTheory& theory,
                                    const std::vector<std::uint64_t>& masks) {
  std::vector<Diagnosis> out;
  out.reserve(masks.size());
  for (auto mask : masks) out.push_back({fault_names(theory.hypotheses(), mask), 0.0});
  return out;
}

}  // namespace

void check_hypothesis_cap(std::size_t count, const EnumerationLimits& limits) {
  if (count > limits.max_hypotheses || count > kMaxRepresentableHypotheses) {
    throw DiagnosisError(
        ErrorCode::hypothesis_space_too_large,
        "hypothesis space too large: " + std::to_string(count) +
            " hypotheses exceed the enumeration cap of " +
            std::to_string(std::min(limits.max_hypotheses, kMaxRepresentableHypotheses)));
  }
}

bool fault_mask_less(std::uint64_t a, std::uint64_t b) noexcept {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  while (a != 0 && b != 0) {
    const int la = std::countr_zero(a);
    const int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

std::vector<std::string> fault_names(std::span<const std::string> hypotheses, std::uint64_t mask) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    if ((mask >> k) & 1U) out.push_back(hypotheses[k]);
  }
  return out;
}

CompiledFormula::CompiledFormula() : nodes_{{Op::truth, 0, 0}} {}

bool CompiledFormula::eval(std::uint32_t index, std::uint64_t mask) const {
  const Node& node = nodes_[index];
  switch (node.op) {
    case Op::truth:
      return true;
    case Op::falsity:
      return false;
    case Op::variable:
      return (mask >> node.arg) & 1U;
    case Op::negation:
      return !eval(children_[node.arg], mask);
    case Op::conjunction:
      for (std::uint32_t i = 0; i < node.count; ++i) {
        if (!eval(children_[node.arg + i], mask)) return false;
      }
      return true;
    case Op::disjunction:
      for (std::uint32_t i = 0; i < node.count; ++i) {
        if (eval(children_[node.arg + i], mask)) return true;
      }
      return false;
    case Op::implication:
      return !eval(children_[node.arg], mask) || eval(children_[node.arg + 1], mask);
    case Op::biconditional:
      return eval(children_[node.arg], mask) == eval(children_[node.arg + 1], mask);
  }
  return false;
}

const Formula* CompletedTheory::definition(std::string_view observable) const {
  for (const auto& d : definitions_) {
    if (d.observable == observable) return &d.formula;
  }
  return nullptr;
}

std::uint32_t CompletedTheory::compile_node(CompiledFormula& out, const Formula& formula) const {
  using Op = CompiledFormula::Op;
  const auto push = [&](Op op, std::uint32_t arg, std::uint32_t count) {
    out.nodes_.push_back({op, arg, count});
    return static_cast<std::uint32_t>(out.nodes_.size() - 1);
  };
  switch (formula.kind()) {
    case Formula::Kind::constant_true:
      return push(Op::truth, 0, 0);
    case Formula::Kind::constant_false:
      return push(Op::falsity, 0, 0);
    case Formula::Kind::atom: {
      const auto& id = formula.atom_id();
      if (const auto it = hypothesis_bits_.find(id); it != hypothesis_bits_.end()) {
        return push(Op::variable, it->second, 0);
      }
      if (const Formula* def = definition(id)) return compile_node(out, *def);
      if (free_observables_.contains(id)) {
        throw DiagnosisError(ErrorCode::undefined_observable,
                             "free observable '" + id + "' has no definition");
      }
      throw DiagnosisError(ErrorCode::unknown_atom, "unknown atom '" + id + "'");
    }
    default:
      break;
  }
  std::vector<std::uint32_t> kids;
  kids.reserve(formula.operands().size());
  for (const auto& child : formula.operands()) kids.push_back(compile_node(out, child));
  const auto first = static_cast<std::uint32_t>(out.children_.size());
  out.children_.insert(out.children_.end(), kids.begin(), kids.end());
  const auto count = static_cast<std::uint32_t>(kids.size());
  switch (formula.kind()) {
    case Formula::Kind::negation:
      return push(Op::negation, first, count);
    case Formula::Kind::conjunction:
      return push(Op::conjunction, first, count);
    case Formula::Kind::disjunction:
      return push(Op::disjunction, first, count);
    case Formula::Kind::implication:
      return push(Op::implication, first, count);
    default:
      return push(Op::biconditional, first, count);
  }
}

CompiledFormula CompletedTheory::compile(const Formula& formula) const {
  CompiledFormula out;
  out.nodes_.clear();
  out.root_ = compile_node(out, formula);
  return out;
}

CompiledFormula CompletedTheory::compile(const ObservationSet& observations) const {
  return compile(observations.as_formula());
}

CompletedTheory clark_completion(const FaultModel& model) {
  CompletedTheory theory;
  for (const auto& h : model.hypotheses()) {
    theory.hypothesis_bits_.emplace(h.id, static_cast<std::uint32_t>(theory.hypotheses_.size()));
    theory.hypotheses_.push_back(h.id);
  }
  for (const auto& observable : model.observables()) {
    std::vector<Formula> bodies;
    for (const auto& rule : model.rules()) {
      if (rule.head != observable.id) continue;
      bodies.push_back(rule.body.empty() ? Formula::truth() : rule.body_formula());
    }
    if (bodies.empty()) {
      theory.free_observables_.insert(observable.id);
      continue;
    }
    Formula def = bodies.size() == 1 ? bodies.front() : Formula::disjunction(std::move(bodies));
    theory.definitions_.push_back({observable.id, std::move(def)});
  }
  theory.extra_facts_ = model.extra_facts();
  theory.facts_ = theory.compile(Formula::conjunction(theory.extra_facts_));
  return theory;
}

bool evaluate_formula(const CompletedTheory& theory, const Formula& formula,
                      const Interpretation& interp) {
  return theory.compile(formula).evaluate(interp);
}

bool scenario_consistent(const CompletedTheory& theory, const Scenario& scenario,
                         const ObservationSet& observations, const EnumerationLimits& limits) {
  const std::size_t m = theory.hypothesis_count();
  check_hypothesis_cap(m, limits);
  const BoundScenario bound = bind(theory, scenario);
  const CompiledFormula obs = theory.compile(observations);
  if (bound.contradictory) return false;
  bool found = false;
  for_each_extension(bound.care, bound.value, m, [&](std::uint64_t mask) {
    found = theory.facts().evaluate(mask) && obs.evaluate(mask);
    return !found;
  });
  return found;
}

bool scenario_explains(const CompletedTheory& theory, const Scenario& scenario, const Formula& goal,
                       const EnumerationLimits& limits) {
  const std::size_t m = theory.hypothesis_count();
  check_hypothesis_cap(m, limits);
  const BoundScenario bound = bind(theory, scenario);
  const CompiledFormula compiled_goal = theory.compile(goal);
  bool any_model = false;
  bool entailed = true;
  if (!bound.contradictory) {
    for_each_extension(bound.care, bound.value, m, [&](std::uint64_t mask) {
      if (!theory.facts().evaluate(mask)) return true;
      any_model = true;
      if (!compiled_goal.evaluate(mask)) entailed = false;
      return entailed;
    });
  }
  if (!any_model) {
    throw DiagnosisError(ErrorCode::inconsistent_scenario,
                         "inconsistent scenario: no assignment extends it and satisfies the facts");
  }
  return entailed;
}

std::vector<Scenario> maximal_scenarios(const CompletedTheory& theory, const FaultModel& model,
                                        const EnumerationLimits& limits) {
  const std::size_t m = model.hypothesis_count();
  check_hypothesis_cap(m, limits);
  std::vector<Scenario> out;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t index = 0; index < count; ++index) {
    const Interpretation interp = Interpretation::from_index(index, m);
    if (!theory.facts().evaluate(interp)) continue;
    Scenario s;
    s.asserted.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      s.asserted.push_back({model.hypotheses()[k].id, interp.is_faulty(k)});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Diagnosis> consistency_diagnoses(const CompletedTheory& theory, const FaultModel& model,
                                             const ObservationSet& observations,
                                             const EnumerationLimits& limits) {
  const std::size_t m = model.hypothesis_count();
  check_hypothesis_cap(m, limits);
  const CompiledFormula obs = theory.compile(observations);
  const std::size_t n = std::size_t{1} << m;
  std::vector<std::uint8_t> valid(n);
  for (std::size_t s = 0; s < n; ++s) {
    valid[s] = theory.facts().evaluate(s) && obs.evaluate(s);
  }
  const auto masks = minimal_masks(valid, m);
  if (masks.empty()) {
    throw DiagnosisError(ErrorCode::observation_unexplainable,
                         "observation unexplainable: no fault set is consistent with it");
  }
  return to_diagnoses(theory, masks);
}

std::vector<Diagnosis> abductive_explanations(const CompletedTheory& theory,
                                              const FaultModel& model,
                                              const ObservationSet& observations,
                                              const EnumerationLimits& limits) {
  if (!observations.all_positive()) {
    throw DiagnosisError(ErrorCode::negative_observation,
                         "abduction requires positive observations");
  }
  const std::size_t m = model.hypothesis_count();
  check_hypothesis_cap(m, limits);
  const CompiledFormula goal = theory.compile(observations);
  const std::size_t n = std::size_t{1} << m;

  // A positive scenario D is extended by exactly the supersets of D.
  std::vector<std::uint8_t> some_model(n);
  std::vector<std::uint8_t> some_counterexample(n);
  for (std::size_t s = 0; s < n; ++s) {
    const bool facts = theory.facts().evaluate(s);
    some_model[s] = facts;
    some_counterexample[s] = facts && !goal.evaluate(s);
  }
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t s = 0; s < n; ++s) {
      if (s & bit) continue;
      some_model[s] |= some_model[s | bit];
      some_counterexample[s] |= some_counterexample[s | bit];
    }
  }
  std::vector<std::uint8_t> valid(n);
  for (std::size_t s = 0; s < n; ++s) valid[s] = some_model[s] && !some_counterexample[s];

  const auto masks = minimal_masks(valid, m);
  if (masks.empty()) {
    throw DiagnosisError(ErrorCode::observation_unexplainable,
                         "observation unexplainable: no set of hypotheses entails it");
  }
  return to_diagnoses(theory, masks);
}

}  // namespace diagnoscope
