#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace probint {

/// Largest number of distinct variables any truth-table enumeration will
/// accept unless the caller raises it.
inline constexpr std::size_t kDefaultExpansionCap = 20;

/// Propositional event formula over named Boolean event variables.
///
/// Formulas are immutable and share structure; copying is a pointer copy.
/// `operator==` is structural (syntactic) equality. Semantic equivalence is
/// the separate `equivalent()`.
class Formula {
 public:
  enum class Kind : std::uint8_t { Variable, True, False, Not, And, Or, Implies, Iff };

  /// Throws ValidationError unless `name` is an identifier, optionally
  /// qualified with `::` (as produced by rename_vars).
  static Formula Var(std::string name);
  static Formula True();
  static Formula False();
  static Formula Const(bool value) { return value ? True() : False(); }
  static Formula Not(Formula child);
  static Formula And(Formula left, Formula right);
  static Formula Or(Formula left, Formula right);
  static Formula Implies(Formula left, Formula right);
  static Formula Iff(Formula left, Formula right);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::True || kind() == Kind::False; }

  /// Variable name; empty for other kinds.
  const std::string& name() const;
  /// Only child of Not, left operand of binary kinds.
  const Formula& left() const;
  const Formula& right() const;

  /// Structural hash, consistent with operator==.
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::string name, const Formula* l, const Formula* r);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using VarSet = std::set<std::string>;
using Assignment = std::map<std::string, bool>;

/// True for `[A-Za-z_][A-Za-z0-9_]*` segments joined by `::`, excluding the
/// keywords `true` and `false`.
bool is_valid_identifier(std::string_view name);

/// Grammar (whitespace-insensitive, `#` starts a line comment):
///
///   formula := iff
///   iff     := impl ("<->" impl)*
///   impl    := disj ("->" impl)?
///   disj    := conj ("|" conj)*
///   conj    := unary ("&" unary)*
///   unary   := "!" unary | atom
///   atom    := IDENT | "true" | "false" | "(" formula ")"
Formula parse_formula(std::string_view text);

/// Minimal-parenthesis rendering in the grammar above; parse_formula of the
/// result is structurally equal to `f`.
std::string to_string(const Formula& f);
std::ostream& operator<<(std::ostream& os, const Formula& f);

VarSet vars(const Formula& f);
void collect_vars(const Formula& f, VarSet& out);

/// Throws UnboundVariable if a variable of `f` is missing from `mu`.
bool eval(const Formula& f, const Assignment& mu);

/// Truth-table equivalence over the union of both variable sets. Throws
/// ExpansionTooLarge when that union is larger than `cap`.
bool equivalent(const Formula& f, const Formula& g,
                std::size_t cap = kDefaultExpansionCap);

/// Every variable `v` becomes `prefix::v`.
Formula rename_vars(const Formula& f, std::string_view prefix);
std::string qualified_name(std::string_view prefix, std::string_view name);

/// Left-nested conjunction; `true` when empty.
Formula conjoin(std::span<const Formula> parts);
/// Left-nested disjunction; `false` when empty.
Formula disjoin(std::span<const Formula> parts);

/// Formula compiled against a fixed variable numbering, evaluated on a bit
/// mask (bit i = value of variable i). Used by the enumeration loops.
class Evaluator {
 public:
  using Index = std::unordered_map<std::string, unsigned>;

  /// Throws UnboundVariable if `f` mentions a variable missing from `index`.
  Evaluator(const Formula& f, const Index& index);

  bool operator()(std::uint64_t bits) const { return eval_node(root_, bits); }

 private:
  struct Op {
    Formula::Kind kind;
    std::uint32_t a = 0;  // variable index, or first child
    std::uint32_t b = 0;  // second child
  };

  std::uint32_t compile(const Formula& f, const Index& index);
  bool eval_node(std::uint32_t at, std::uint64_t bits) const;

  std::vector<Op> ops_;
  std::uint32_t root_ = 0;
};

/// Numbering of `names` in iteration order, for Evaluator.
Evaluator::Index index_variables(const VarSet& names);

/// Throws ExpansionTooLarge if 2^count assignments may not be enumerated.
void check_expansion(std::size_t count, std::size_t cap);

}  // namespace probint
