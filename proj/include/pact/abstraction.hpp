#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pact/actions.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

enum class Method { IntraI, IntraII, InterI, InterII };

const char* method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
/// Kind of the actions the method produces.
ActionKind method_kind(Method m);
bool is_inter(Method m);

/// Branch `branch` of input action `action`.
struct BranchRef {
  std::size_t action = 0;
  std::size_t branch = 0;
  bool operator==(const BranchRef&) const = default;
};

/// Partition of the input branches into groups, one abstract branch per
/// group. Intra-action plans reference action 0 only.
struct GroupingPlan {
  std::vector<std::vector<BranchRef>> groups;
};

/// Every branch in its own group.
GroupingPlan singleton_grouping(const ActionDescription& a);
/// Group i holds branch i of every instance that has one; shorter instances
/// are padded implicitly.
GroupingPlan aligned_grouping(std::span<const ActionDescription> instances);
/// Groups given by branch labels. A label may be qualified as
/// "instance.label" and must be so when it is ambiguous.
GroupingPlan grouping_from_labels(std::span<const ActionDescription> instances,
                                  const std::vector<std::vector<std::string>>& groups);

/// Checks that the groups are non-empty, disjoint and cover every branch;
/// inter plans may take at most one branch per instance per group.
void validate_grouping(const GroupingPlan& g, std::span<const ActionDescription> instances,
                       bool inter);

/// Least upper bound of the effects in the per-fluent constraint lattice.
EffectSpec weaken_effects(std::span<const EffectSpec> effects);

ActionDescription intra_abstract_I(const ActionDescription& a, const GroupingPlan& g,
                                   const Vocabulary& v);
/// Members of a group that share a condition are merged first by adding
/// their probability bounds; the remaining conditions must be disjoint.
ActionDescription intra_abstract_II(const ActionDescription& a, const GroupingPlan& g,
                                    const Vocabulary& v);
ActionDescription inter_abstract_I(std::span<const ActionDescription> instances,
                                   const GroupingPlan& g, const Vocabulary& v,
                                   const std::string& name);
/// Accepts concrete, intra Method II and inter actions as instances, so
/// abstractions can be stacked.
ActionDescription inter_abstract_II(std::span<const ActionDescription> instances,
                                    const GroupingPlan& g, const Vocabulary& v,
                                    const std::string& name);

/// Applies `m`; intra methods take exactly one instance and keep its name
/// unless `name` is non-empty.
ActionDescription abstract_actions(Method m, std::span<const ActionDescription> instances,
                                   const GroupingPlan& g, const Vocabulary& v,
                                   const std::string& name);

/// Replaces the pair by (new_conj, new_disj) after checking new_conj ⊨ conj
/// and disj ⊨ new_disj.
ConjDisj weaken_condition_pair(const ConjDisj& cd, const Sentence& new_conj,
                               const Sentence& new_disj, const Vocabulary& v);

}  // namespace pact
