#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pact/abstraction.hpp"
#include "pact/actions.hpp"
#include "pact/chronicle.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

/// Expected utilities closer than this are ties.
inline constexpr double kTieEpsilon = 1e-9;

/// Additive utility over a chronicle's final state and its elapsed time.
/// Each component is piecewise linear through its knots and constant past
/// the first and last knot. Symbolic fluents use symbol positions as x.
class UtilityFunction {
 public:
  struct Knot {
    double x = 0.0;
    double u = 0.0;
    bool operator==(const Knot&) const = default;
  };

  void set_component(std::size_t fluent, std::vector<Knot> knots);
  void set_elapsed(std::vector<Knot> knots);
  const std::map<std::size_t, std::vector<Knot>>& components() const { return components_; }
  const std::vector<Knot>& elapsed() const { return elapsed_; }

  double evaluate(const State& s, int elapsed) const;
  /// Smallest and largest utility over the envelope's states.
  std::pair<double, double> range(const Envelope& e, int elapsed) const;

  /// Knots strictly increasing in x, fluents inside the vocabulary.
  void validate(const Vocabulary& v) const;

  bool operator==(const UtilityFunction&) const = default;

 private:
  std::map<std::size_t, std::vector<Knot>> components_;
  std::vector<Knot> elapsed_;
};

/// Abstract action over alternative instances (action, choice or task
/// names). With no groups, branches are grouped by position.
struct ChoiceNode {
  std::string name;
  std::vector<std::string> instances;
  Method method = Method::InterII;
  std::vector<std::vector<std::string>> groups;
  bool operator==(const ChoiceNode&) const = default;
};

/// Decomposition of a task into an ordered sequence of steps.
struct TaskNode {
  std::string name;
  std::vector<std::string> steps;
  bool operator==(const TaskNode&) const = default;
};

/// Shape of a uniform network: n instances per abstract action, p steps per
/// decomposition, k abstraction levels.
struct UniformShape {
  int n = 0;
  int p = 0;
  int k = 0;
  bool operator==(const UniformShape&) const = default;
};

/// Abstraction/decomposition network with its world model and utility.
///
/// Each node has a summary: the action sequence standing for it in a plan.
/// An action's summary is itself, a task's is the concatenation of its
/// steps' summaries, and a choice's is built position by position by
/// abstracting its instances' summaries, which must have equal lengths.
/// Positions whose inputs are already abstract use inter Method II.
class Network {
 public:
  Network(Vocabulary vocab, StateDistribution initial, UtilityFunction utility,
          std::vector<ActionDescription> actions, std::vector<ChoiceNode> choices,
          std::vector<TaskNode> tasks, std::string root,
          std::optional<UniformShape> uniform = std::nullopt);

  const Vocabulary& vocabulary() const { return vocab_; }
  const StateDistribution& initial() const { return initial_; }
  const UtilityFunction& utility() const { return utility_; }
  const std::string& root() const { return root_; }
  const std::optional<UniformShape>& uniform() const { return uniform_; }
  const std::vector<ActionDescription>& actions() const { return actions_; }
  const std::vector<ChoiceNode>& choices() const { return choices_; }
  const std::vector<TaskNode>& tasks() const { return tasks_; }

  bool has_node(const std::string& name) const;
  bool is_choice(const std::string& name) const;
  bool is_task(const std::string& name) const;
  const ChoiceNode& choice(const std::string& name) const;
  const TaskNode& task(const std::string& name) const;
  const ActionDescription& action(const std::string& name) const;

  const std::vector<ActionDescription>& summary(const std::string& name) const;
  /// Tasks replaced by their steps, recursively.
  std::vector<std::string> expand(const std::string& name) const;
  /// Number of concrete plans below the node, saturating at UINT64_MAX.
  std::uint64_t concrete_plan_count(const std::string& name) const;
  /// Every concrete plan below the node as a list of action names. Throws
  /// BoundError past `limit` plans.
  std::vector<std::vector<std::string>> concrete_plans(const std::string& name,
                                                       std::uint64_t limit) const;

  /// The action sequence of a plan given as node names.
  std::vector<const ActionDescription*> plan_actions(const std::vector<std::string>& steps) const;

 private:
  enum class Type { Action, Choice, Task };
  const std::vector<ActionDescription>& build_summary(const std::string& name,
                                                      std::vector<std::string>& stack);

  Vocabulary vocab_;
  StateDistribution initial_;
  UtilityFunction utility_;
  std::vector<ActionDescription> actions_;
  std::vector<ChoiceNode> choices_;
  std::vector<TaskNode> tasks_;
  std::string root_;
  std::optional<UniformShape> uniform_;
  std::map<std::string, std::pair<Type, std::size_t>> index_;
  std::map<std::string, std::vector<ActionDescription>> summaries_;
};

struct EuInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const EuInterval&) const = default;
};

/// Expected utility bounds of an action sequence. Concrete sequences get the
/// exact value. Otherwise each chronicle contributes a probability interval
/// and a utility range, and the bounds are the extreme values of
/// Σ m_c·u_c over masses m_c inside the intervals summing to one.
EuInterval expected_utility(std::span<const ActionDescription* const> plan,
                            const Vocabulary& v, const StateDistribution& d0,
                            const UtilityFunction& u);

struct CandidatePlan {
  std::vector<std::string> steps;
  EuInterval eu;
  int depth = 0;
  bool evaluated = false;
  bool concrete = false;
};

/// b.eu.hi < a.eu.lo - kTieEpsilon.
bool dominates(const CandidatePlan& a, const CandidatePlan& b);

/// Children of `plan` with its leftmost choice replaced by each instance.
/// Throws ValidationError on a fully concrete plan.
std::vector<CandidatePlan> refine(const CandidatePlan& plan, const Network& net);

/// One refinement: the parent's bounds and its children's.
struct RefinementRecord {
  std::vector<std::string> parent;
  EuInterval parent_eu;
  std::vector<EuInterval> children_eu;
};

struct SearchStats {
  std::uint64_t plans_examined = 0;
  /// Concrete plans among those examined.
  std::uint64_t concrete_examined = 0;
  std::uint64_t total_concrete_plans = 0;
  /// Eliminated plans by refinement depth.
  std::map<int, std::uint64_t> pruned_per_depth;
  std::uint64_t abstract_pruned = 0;
  std::optional<UniformShape> uniform;
};

struct SearchOptions {
  /// Keep a RefinementRecord per step; parents the search did not need to
  /// evaluate are evaluated for the record without being counted.
  bool record_refinements = false;
};

struct SearchResult {
  /// Concrete plans attaining the maximum expected utility.
  std::vector<CandidatePlan> optimal;
  /// Every surviving plan, best first.
  std::vector<CandidatePlan> survivors;
  SearchStats stats;
  std::vector<RefinementRecord> refinements;
};

/// Best-first refinement with dominance pruning. Plans are evaluated only
/// when there is more than one to compare, or to report a lone concrete plan.
SearchResult search(const Network& net, const std::string& root,
                    const SearchOptions& options = {});

/// n·(p + p² + ... + p^k), saturating.
std::uint64_t maximal_pruning_bound(int n, int p, int k);
/// n^(p + p² + ... + p^k), saturating.
std::uint64_t exhaustive_plan_count(int n, int p, int k);

}  // namespace pact
