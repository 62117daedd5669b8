#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pact/error.hpp"

namespace pact {

/// Probabilities closer than this are treated as equal.
inline constexpr double kProbTolerance = 1e-9;

/// Values are plain integers: the integer itself for range domains, the
/// index of the symbol for symbolic domains.
using Value = int;

/// Finite value set of a fluent.
class Domain {
 public:
  static Domain symbols(std::vector<std::string> names);
  static Domain range(Value lo, Value hi);

  bool is_symbolic() const { return !symbols_.empty(); }
  std::size_t size() const;
  bool contains(Value v) const { return v >= lo_ && v <= hi_; }
  Value min() const { return lo_; }
  Value max() const { return hi_; }
  std::vector<Value> values() const;

  std::string format(Value v) const;
  std::optional<Value> parse(std::string_view token) const;
  const std::vector<std::string>& symbol_names() const { return symbols_; }

  bool operator==(const Domain&) const = default;

 private:
  Domain() = default;
  std::vector<std::string> symbols_;
  Value lo_ = 0;
  Value hi_ = 0;
};

struct Fluent {
  std::string name;
  Domain domain;
  bool operator==(const Fluent&) const = default;
};

/// One value per fluent, indexed by the fluent's position in the vocabulary.
class State {
 public:
  State() = default;
  explicit State(std::vector<Value> values) : values_(std::move(values)) {}

  Value operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Value>& values() const { return values_; }
  State with(std::size_t fluent, Value v) const;

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::vector<Value> values_;
};

/// Ordered list of uniquely named fluents with finite domains.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<Fluent> fluents);

  std::size_t size() const { return fluents_.size(); }
  const Fluent& fluent(std::size_t i) const { return fluents_[i]; }
  const std::vector<Fluent>& fluents() const { return fluents_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Like index_of but throws ValidationError for unknown names.
  std::size_t require(std::string_view name) const;

  /// Number of states, saturating at UINT64_MAX.
  std::uint64_t state_count() const;
  bool contains(const State& s) const;

  /// Calls fn on every state, varying only the listed fluents; the others
  /// stay at `base`'s values. Fluents are varied in vocabulary order with the
  /// last one changing fastest.
  void for_each_assignment(std::span<const std::size_t> varying,
                           const State& base,
                           const std::function<void(const State&)>& fn) const;
  /// Enumerates every state; throws BoundError past `limit` states.
  std::vector<State> states(std::uint64_t limit = 1u << 22) const;
  /// Lowest value of every fluent.
  State first_state() const;

  std::string describe(const State& s) const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<Fluent> fluents_;
};

/// A pre-action state together with a post-action state. Sentences about a
/// single moment evaluate with start == end.
struct Transition {
  State start;
  State end;
  auto operator<=>(const Transition&) const = default;
  bool operator==(const Transition&) const = default;
};

enum class Moment { Start, End };
enum class Relation { Eq, Ne, Lt, Le, Gt, Ge };

struct Term {
  std::size_t fluent = 0;
  Moment moment = Moment::End;
  bool operator==(const Term&) const = default;
};

/// Immutable propositional sentence over fluent relations. Atoms compare a
/// fluent (at the start or end of an action) with a constant or with another
/// fluent plus an integer offset.
class Sentence {
 public:
  struct Node;

  /// TRUE.
  Sentence();
  static Sentence truth();
  static Sentence falsity();
  static Sentence compare(Term lhs, Relation rel, Value constant);
  static Sentence compare(Term lhs, Relation rel, Term rhs, Value offset = 0);
  /// Shorthand for `fluent = value`.
  static Sentence equals(std::size_t fluent, Value value);

  friend Sentence operator&&(const Sentence& a, const Sentence& b);
  friend Sentence operator||(const Sentence& a, const Sentence& b);
  friend Sentence operator!(const Sentence& a);
  static Sentence all_of(std::span<const Sentence> parts);
  static Sentence any_of(std::span<const Sentence> parts);

  bool holds(const State& s) const { return holds(s, s); }
  bool holds(const State& start, const State& end) const;
  bool holds(const Transition& t) const { return holds(t.start, t.end); }

  bool is_true() const;
  bool is_false() const;
  /// Sorted indices of the fluents the sentence mentions.
  std::vector<std::size_t> fluents() const;

  /// Checks every atom against the vocabulary: known fluent, constant inside
  /// the domain, operands of compatible type. Throws ValidationError.
  void validate(const Vocabulary& v) const;

  std::string to_string(const Vocabulary& v) const;

  bool operator==(const Sentence& other) const;
  const Node& node() const { return *node_; }

 private:
  explicit Sentence(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  static Sentence combine(bool conjunction, std::span<const Sentence> parts);
  std::shared_ptr<const Node> node_;
};

struct Sentence::Node {
  enum class Kind { Constant, Atom, Not, And, Or };
  Kind kind = Kind::Constant;
  bool constant = true;
  // Atom fields.
  Term lhs;
  Relation relation = Relation::Eq;
  bool rhs_is_term = false;
  Term rhs;
  Value value = 0;  // constant operand, or offset added to rhs
  // Not / And / Or operands.
  std::vector<Sentence> children;
};

/// Every state satisfying `s`.
std::vector<State> models(const Sentence& s, const Vocabulary& v);
/// models(a) ⊆ models(b), decided by enumerating the fluents either mentions.
bool entails(const Sentence& a, const Sentence& b, const Vocabulary& v);
/// models(a) == models(b).
bool equivalent(const Sentence& a, const Sentence& b, const Vocabulary& v);

/// Lower probability of phi given a state set: 1 if every member satisfies
/// phi, else 0. Throws DegenerateEffectError on an empty set.
int lower_prob(const Sentence& phi, std::span<const State> states);
/// Upper probability: 0 if no member satisfies phi, else 1.
int upper_prob(const Sentence& phi, std::span<const State> states);
int lower_prob(const Sentence& phi, std::span<const Transition> transitions);
int upper_prob(const Sentence& phi, std::span<const Transition> transitions);

/// Closed probability interval [lo, hi] within [0, 1].
class ProbInterval {
 public:
  ProbInterval() = default;
  ProbInterval(double lo, double hi);
  static ProbInterval point(double p) { return {p, p}; }
  /// Clamps into [0, 1] before constructing; used after float arithmetic.
  static ProbInterval clamped(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_point(double tol = kProbTolerance) const { return hi_ - lo_ <= tol; }
  bool contains(double p, double tol = kProbTolerance) const {
    return p >= lo_ - tol && p <= hi_ + tol;
  }
  bool contains(const ProbInterval& o, double tol = kProbTolerance) const {
    return o.lo_ >= lo_ - tol && o.hi_ <= hi_ + tol;
  }
  bool operator==(const ProbInterval&) const = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Discrete distribution over pairwise distinct states.
class StateDistribution {
 public:
  using Entry = std::pair<State, double>;

  StateDistribution() = default;
  /// Throws ValidationError unless the weights lie in [0,1], sum to one
  /// within kProbTolerance, and the states are distinct members of `v`.
  StateDistribution(const Vocabulary& v, std::vector<Entry> entries);
  static StateDistribution point(const Vocabulary& v, State s);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// Entries with non-zero weight.
  std::vector<Entry> support() const;

  /// lambda * a + (1 - lambda) * b.
  static StateDistribution mix(const Vocabulary& v, const StateDistribution& a,
                               const StateDistribution& b, double lambda);

  bool operator==(const StateDistribution&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Total weight of the states satisfying `s`.
double prob_of(const Sentence& s, const StateDistribution& d);

}  // namespace pact
