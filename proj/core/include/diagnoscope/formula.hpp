#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diagnoscope {

/// Immutable propositional formula over named atoms. Copies share structure.
///
/// Conjunction and disjunction are n-ary; an empty conjunction is true and
/// an empty disjunction is false. Atoms are resolved against a model only
/// when a formula is compiled or evaluated, so a Formula may mention ids
/// that are not (yet) declared anywhere.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    constant_true,
    constant_false,
    atom,
    negation,
    conjunction,
    disjunction,
    implication,
    biconditional,
  };

  /// Default-constructs the constant true.
  Formula();

  static Formula truth();
  static Formula falsity();
  static Formula atom(std::string id);
  static Formula negation(Formula operand);
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula implication(Formula antecedent, Formula consequent);
  static Formula biconditional(Formula lhs, Formula rhs);

  Kind kind() const noexcept;
  /// Only meaningful for Kind::atom; empty otherwise.
  const std::string& atom_id() const noexcept;
  std::span<const Formula> operands() const noexcept;

  /// Inserts every atom id mentioned anywhere in the formula.
  void collect_atoms(std::set<std::string, std::less<>>& out) const;
  std::set<std::string, std::less<>> atoms() const;

  /// Renders in the model-file syntax (`! & | -> <->`) with the minimum
  /// parentheses needed to parse back to the same tree.
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

}  // namespace diagnoscope
