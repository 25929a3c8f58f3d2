#include "diagnoscope/formula.hpp"

#include <utility>

#include "diagnoscope/error.hpp"

namespace diagnoscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::unknown_atom:
      return "unknown atom";
    case ErrorCode::undefined_observable:
      return "undefined observable";
    case ErrorCode::inconsistent_scenario:
      return "inconsistent scenario";
    case ErrorCode::observation_unexplainable:
      return "observation unexplainable";
    case ErrorCode::negative_observation:
      return "abduction requires positive observations";
    case ErrorCode::zero_probability:
      return "observation has zero probability";
    case ErrorCode::hypothesis_space_too_large:
      return "hypothesis space too large";
    case ErrorCode::treatment_space_too_large:
      return "treatment space too large";
    case ErrorCode::no_finite_threshold:
      return "no finite threshold";
    case ErrorCode::invalid_argument:
      return "invalid argument";
  }
  return "error";
}

struct Formula::Node {
  Kind kind = Kind::constant_true;
  std::string id;
  std::vector<Formula> operands;
};

namespace {

int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::biconditional:
      return 1;
    case Formula::Kind::implication:
      return 2;
    case Formula::Kind::disjunction:
      return 3;
    case Formula::Kind::conjunction:
      return 4;
    case Formula::Kind::negation:
      return 5;
    default:
      return 6;
  }
}

}  // namespace

Formula::Formula() : Formula(truth()) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::truth() {
  static const auto node = std::make_shared<const Node>(Node{Kind::constant_true, {}, {}});
  return Formula(node);
}

Formula Formula::falsity() {
  static const auto node = std::make_shared<const Node>(Node{Kind::constant_false, {}, {}});
  return Formula(node);
}

Formula Formula::atom(std::string id) {
  return Formula(std::make_shared<const Node>(Node{Kind::atom, std::move(id), {}}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::negation, {}, {std::move(operand)}}));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
  return Formula(std::make_shared<const Node>(Node{Kind::conjunction, {}, std::move(operands)}));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  return Formula(std::make_shared<const Node>(Node{Kind::disjunction, {}, std::move(operands)}));
}

Formula Formula::implication(Formula antecedent, Formula consequent) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::implication, {}, {std::move(antecedent), std::move(consequent)}}));
}

Formula Formula::biconditional(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::biconditional, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }

const std::string& Formula::atom_id() const noexcept { return node_->id; }

std::span<const Formula> Formula::operands() const noexcept { return node_->operands; }

void Formula::collect_atoms(std::set<std::string, std::less<>>& out) const {
  if (node_->kind == Kind::atom) {
    out.insert(node_->id);
    return;
  }
  for (const auto& op : node_->operands) op.collect_atoms(out);
}

std::set<std::string, std::less<>> Formula::atoms() const {
  std::set<std::string, std::less<>> out;
  collect_atoms(out);
  return out;
}

std::string Formula::to_string() const {
  const auto wrap = [](const Formula& child, bool parens) {
    std::string text = child.to_string();
    return parens ? "(" + text + ")" : text;
  };
  const int self = precedence(kind());
  switch (kind()) {
    case Kind::constant_true:
      return "true";
    case Kind::constant_false:
      return "false";
    case Kind::atom:
      return atom_id();
    case Kind::negation: {
      const Formula& child = operands()[0];
      return "!" + wrap(child, precedence(child.kind()) < self);
    }
    case Kind::conjunction:
    case Kind::disjunction: {
      if (operands().empty()) return kind() == Kind::conjunction ? "true" : "false";
      // A one-element chain has no textual form of its own.
      if (operands().size() == 1) {
        return "(" + operands()[0].to_string() + ")";
      }
      const char* sep = kind() == Kind::conjunction ? " & " : " | ";
      std::string out;
      for (std::size_t i = 0; i < operands().size(); ++i) {
        if (i > 0) out += sep;
        out += wrap(operands()[i], precedence(operands()[i].kind()) <= self);
      }
      return out;
    }
    case Kind::implication:
    case Kind::biconditional: {
      const char* sep = kind() == Kind::implication ? " -> " : " <-> ";
      const Formula& lhs = operands()[0];
      const Formula& rhs = operands()[1];
      // `->` groups to the right and `<->` to the left, so the matching
      // side may repeat the operator without parentheses.
      const bool right_assoc = kind() == Kind::implication;
      const auto needs = [&](const Formula& child, bool open_side) {
        const int p = precedence(child.kind());
        return p < self || (p == self && !open_side);
      };
      return wrap(lhs, needs(lhs, !right_assoc)) + sep + wrap(rhs, needs(rhs, right_assoc));
    }
  }
  return "true";
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.atom_id() != b.atom_id()) return false;
  const auto lhs = a.operands();
  const auto rhs = b.operands();
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!(lhs[i] == rhs[i])) return false;
  }
  return true;
}

}  // namespace diagnoscope
