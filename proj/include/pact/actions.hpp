#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pact/worldmodel.hpp"

namespace pact {

/// Per-fluent effect constraint. Each constraint maps the fluent's current
/// value to the set of values it may take after the action:
///
///   exact(v)            {v}
///   among({v1, v2})     {v1, v2}
///   relative(d)         {x + d}
///   relative_range(a,b) {x + a, ..., x + b}
///   anything()          the whole domain
///   maybe_unchanged(c)  c(x) ∪ {x}
///   unchanged()         {x}
///
/// The constraints form a join semilattice (see join), which is what effect
/// weakening uses to find the tightest effect entailed by several others.
class Constraint {
 public:
  enum class Core { None, Absolute, Relative, Any };

  Constraint() = default;  // unchanged
  static Constraint unchanged() { return {}; }
  static Constraint exact(Value v);
  static Constraint among(std::vector<Value> values);
  static Constraint relative(Value delta);
  static Constraint relative_range(Value lo, Value hi);
  static Constraint anything();
  static Constraint maybe_unchanged(const Constraint& inner);

  Core core() const { return core_; }
  /// Sorted, distinct absolute values (Core::Absolute).
  const std::vector<Value>& values() const { return values_; }
  Value delta_lo() const { return delta_lo_; }
  Value delta_hi() const { return delta_hi_; }
  /// Whether the current value is always among the outcomes.
  bool keeps_current() const { return keep_; }

  bool is_unchanged() const { return core_ == Core::None; }
  /// Exactly one outcome for every current value.
  bool is_deterministic() const;
  /// The same constraint without the maybe-unchanged flag.
  Constraint inner() const;

  /// Outcomes for `current`, restricted to the domain, sorted ascending.
  std::vector<Value> outcomes(Value current, const Domain& d) const;

  /// Least upper bound: the tightest constraint whose outcomes include the
  /// outcomes of both operands for every current value.
  Constraint join(const Constraint& other) const;

  /// outcomes(x) ⊆ other.outcomes(x) for every x in the domain.
  bool entails(const Constraint& other, const Domain& d) const;

  void validate(const Fluent& f) const;

  bool operator==(const Constraint&) const = default;

 private:
  void normalize();

  Core core_ = Core::None;
  std::vector<Value> values_;
  Value delta_lo_ = 0;
  Value delta_hi_ = 0;
  bool keep_ = true;
};

/// Effect of one branch: constraints keyed by fluent index. Fluents without
/// an entry keep their value.
class EffectSpec {
 public:
  EffectSpec() = default;

  EffectSpec& set(std::size_t fluent, Constraint c);
  Constraint get(std::size_t fluent) const;
  const std::map<std::size_t, Constraint>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  bool is_deterministic() const;
  EffectSpec join(const EffectSpec& other) const;
  bool entails(const EffectSpec& other, const Vocabulary& v) const;
  void validate(const Vocabulary& v) const;

  bool operator==(const EffectSpec&) const = default;

 private:
  std::map<std::size_t, Constraint> entries_;
};

struct SingleCondition {
  Sentence sentence;
  bool operator==(const SingleCondition&) const = default;
};
/// Per-item conditions: the grouped branches (intra) or instances (inter).
struct ConditionList {
  std::vector<Sentence> items;
  bool operator==(const ConditionList&) const = default;
};
/// Sufficient (conj) and necessary (disj) conditions.
struct ConjDisj {
  Sentence conj;
  Sentence disj;
  bool operator==(const ConjDisj&) const = default;
};
using ConditionSpec = std::variant<SingleCondition, ConditionList, ConjDisj>;

struct PointProb {
  double p = 1.0;
  bool operator==(const PointProb&) const = default;
};
struct ProbList {
  std::vector<double> items;
  bool operator==(const ProbList&) const = default;
};
struct RangeProb {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const RangeProb&) const = default;
};
using ProbSpec = std::variant<PointProb, ProbList, RangeProb>;

struct Branch {
  std::string label;
  ConditionSpec condition;
  ProbSpec prob;
  EffectSpec effect;
  bool operator==(const Branch&) const = default;
};

/// How an action description was obtained. Concrete actions come from the
/// domain; the others record which abstraction method produced the branch
/// annotations, which fixes how ConditionList/ProbList are projected.
enum class ActionKind { Concrete, IntraI, IntraII, InterI, InterII };

const char* kind_name(ActionKind k);
std::optional<ActionKind> parse_kind(std::string_view name);

struct ActionDescription {
  std::string name;
  int duration = 0;
  std::vector<Branch> branches;
  ActionKind kind = ActionKind::Concrete;

  bool is_concrete() const { return kind == ActionKind::Concrete; }
  const Branch* find_branch(std::string_view label) const;
  bool operator==(const ActionDescription&) const = default;
};

/// Checks the invariants of a concrete action: single conditions and point
/// probabilities, deterministic valid effects, per-condition probabilities
/// summing to one, distinct effects under a shared condition, and mutually
/// exclusive, exhaustive conditions. Returns one message per violation.
std::vector<std::string> validate_concrete(const ActionDescription& a,
                                           const Vocabulary& v);

/// Full structural check for any kind; throws ValidationError.
void validate_action(const ActionDescription& a, const Vocabulary& v);

/// Merges branches with equivalent conditions and equal effects, summing
/// their probabilities.
ActionDescription merge_duplicate_effects(const ActionDescription& a,
                                          const Vocabulary& v);

/// Appends (FALSE, 0) branches carrying the first branch's effect until the
/// action has `target_count` branches.
ActionDescription pad_branches(const ActionDescription& a, std::size_t target_count);

}  // namespace pact
