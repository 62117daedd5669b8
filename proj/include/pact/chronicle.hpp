#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pact/actions.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

/// Every state consistent with applying `e` to `s`. Fluents the effect does
/// not mention keep their value. Throws DomainOverflowError when a fluent
/// has no in-domain outcome.
std::vector<State> apply_effect(const State& s, const EffectSpec& e, const Vocabulary& v);

/// Per-fluent value sets. The states it stands for are the cartesian product
/// of the sets; a concrete state is an envelope of singletons.
class Envelope {
 public:
  Envelope() = default;
  explicit Envelope(const State& s);
  explicit Envelope(std::vector<std::vector<Value>> values);

  std::size_t size() const { return values_.size(); }
  /// Sorted, distinct values fluent `f` may take.
  const std::vector<Value>& values(std::size_t f) const { return values_[f]; }
  bool is_point() const;
  /// The single state of a point envelope.
  State state() const;
  bool contains(const State& s) const;
  bool contains(const Envelope& other) const;

  /// Calls fn on each member state, varying only `varying`; other fluents
  /// take their smallest value.
  void for_each(std::span<const std::size_t> varying,
                const std::function<void(const State&)>& fn) const;

  std::string describe(const Vocabulary& v) const;
  bool operator==(const Envelope&) const = default;

 private:
  std::vector<std::vector<Value>> values_;
};

/// Union of apply_effect over the envelope's states, per fluent. Throws
/// DomainOverflowError when a fluent has no in-domain outcome at all.
Envelope apply_effect(const Envelope& e, const EffectSpec& effect, const Vocabulary& v);

/// Interval of the probability that `b` is the branch taken, over every
/// state of `e`; kind-dependent for list annotations. A zero upper bound
/// means the branch cannot fire.
ProbInterval branch_factor(const ActionDescription& a, const Branch& b,
                           const Envelope& e, const Vocabulary& v);

struct ChronicleStep {
  int time = 0;
  Envelope state;
};

struct TraceEntry {
  std::string action;
  std::string branch;
  auto operator<=>(const TraceEntry&) const = default;
};

struct Chronicle {
  std::vector<ChronicleStep> steps;
  ProbInterval probability;
  std::vector<TraceEntry> trace;

  const ChronicleStep& final_step() const { return steps.back(); }
};

struct ChronicleSet {
  std::vector<Chronicle> chronicles;
  /// Sum of point probabilities; meaningful for concrete plans.
  double total_probability() const;
};

using Plan = std::vector<const ActionDescription*>;

/// Visits every chronicle of the plan in depth-first order: initial states in
/// distribution order, branches in declaration order. The callback sees the
/// final envelope, the elapsed time, the probability interval and the trace.
void for_each_chronicle(
    std::span<const ActionDescription* const> plan, const Vocabulary& v,
    const StateDistribution& d0,
    const std::function<void(const Envelope& final_state, int elapsed,
                             const ProbInterval& probability,
                             std::span<const TraceEntry> trace)>& fn);

/// Materializes all chronicles, including intermediate steps.
ChronicleSet enumerate_chronicles(std::span<const ActionDescription* const> plan,
                                  const Vocabulary& v, const StateDistribution& d0);

/// Chronicles ordered lexicographically by branch-label trace, then by
/// initial state.
std::vector<const Chronicle*> sorted_by_trace(const ChronicleSet& set);

}  // namespace pact
