#include "pact/abstraction.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace pact {

const char* method_name(Method m) {
  switch (m) {
    case Method::IntraI: return "intra1";
    case Method::IntraII: return "intra2";
    case Method::InterI: return "inter1";
    case Method::InterII: return "inter2";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::IntraI, Method::IntraII, Method::InterI, Method::InterII})
    if (name == method_name(m)) return m;
  return std::nullopt;
}

ActionKind method_kind(Method m) {
  switch (m) {
    case Method::IntraI: return ActionKind::IntraI;
    case Method::IntraII: return ActionKind::IntraII;
    case Method::InterI: return ActionKind::InterI;
    case Method::InterII: return ActionKind::InterII;
  }
  return ActionKind::Concrete;
}

bool is_inter(Method m) { return m == Method::InterI || m == Method::InterII; }

GroupingPlan singleton_grouping(const ActionDescription& a) {
  GroupingPlan g;
  for (std::size_t i = 0; i < a.branches.size(); ++i) g.groups.push_back({{0, i}});
  return g;
}

GroupingPlan aligned_grouping(std::span<const ActionDescription> instances) {
  std::size_t widest = 0;
  for (const auto& a : instances) widest = std::max(widest, a.branches.size());
  GroupingPlan g;
  for (std::size_t i = 0; i < widest; ++i) {
    std::vector<BranchRef> group;
    for (std::size_t k = 0; k < instances.size(); ++k)
      if (i < instances[k].branches.size()) group.push_back({k, i});
    g.groups.push_back(std::move(group));
  }
  return g;
}

GroupingPlan grouping_from_labels(std::span<const ActionDescription> instances,
                                  const std::vector<std::vector<std::string>>& groups) {
  auto resolve = [&](const std::string& token) -> BranchRef {
    std::vector<BranchRef> hits;
    const auto dot = token.find('.');
    for (std::size_t k = 0; k < instances.size(); ++k) {
      std::string_view label = token;
      if (dot != std::string::npos) {
        if (token.substr(0, dot) != instances[k].name) continue;
        label = std::string_view(token).substr(dot + 1);
      }
      for (std::size_t i = 0; i < instances[k].branches.size(); ++i)
        if (instances[k].branches[i].label == label) hits.push_back({k, i});
    }
    if (hits.empty()) throw ValidationError("grouping names unknown branch '" + token + "'");
    if (hits.size() > 1)
      throw ValidationError("branch label '" + token + "' is ambiguous; qualify it as instance.label");
    return hits.front();
  };
  GroupingPlan g;
  for (const auto& group : groups) {
    std::vector<BranchRef> refs;
    for (const auto& token : group) refs.push_back(resolve(token));
    g.groups.push_back(std::move(refs));
  }
  return g;
}

void validate_grouping(const GroupingPlan& g, std::span<const ActionDescription> instances,
                       bool inter) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& group : g.groups) {
    if (group.empty()) throw ValidationError("grouping contains an empty group");
    std::set<std::size_t> actions;
    for (const auto& ref : group) {
      if (ref.action >= instances.size() || ref.branch >= instances[ref.action].branches.size())
        throw ValidationError("grouping references a missing branch");
      if (!seen.insert({ref.action, ref.branch}).second)
        throw ValidationError(fmt::format("branch '{}' of '{}' appears in two groups",
                                          instances[ref.action].branches[ref.branch].label,
                                          instances[ref.action].name));
      if (inter && !actions.insert(ref.action).second)
        throw ValidationError("a group takes two branches from instance '" +
                              instances[ref.action].name + "'");
    }
  }
  for (std::size_t k = 0; k < instances.size(); ++k)
    for (std::size_t i = 0; i < instances[k].branches.size(); ++i)
      if (!seen.count({k, i}))
        throw ValidationError(fmt::format("branch '{}' of '{}' is in no group",
                                          instances[k].branches[i].label, instances[k].name));
}

EffectSpec weaken_effects(std::span<const EffectSpec> effects) {
  if (effects.empty()) throw ValidationError("cannot weaken an empty list of effects");
  EffectSpec out = effects.front();
  for (std::size_t i = 1; i < effects.size(); ++i) out = out.join(effects[i]);
  return out;
}

namespace {

const Branch& branch_of(std::span<const ActionDescription> instances, const BranchRef& r) {
  return instances[r.action].branches[r.branch];
}

std::string group_label(std::span<const ActionDescription> instances,
                        const std::vector<BranchRef>& group) {
  std::string out;
  for (const auto& r : group) {
    if (!out.empty()) out += '+';
    out += branch_of(instances, r).label;
  }
  return out;
}

EffectSpec group_effect(std::span<const ActionDescription> instances,
                        const std::vector<BranchRef>& group) {
  // Padding branches never fire; their effect is left out unless nothing else is.
  std::vector<EffectSpec> effects;
  for (const auto& r : group) {
    const Branch& b = branch_of(instances, r);
    const auto* c = std::get_if<SingleCondition>(&b.condition);
    if (c && c->sentence.is_false()) continue;
    effects.push_back(b.effect);
  }
  if (effects.empty()) effects.push_back(branch_of(instances, group.front()).effect);
  return weaken_effects(effects);
}

struct Bounds {
  double lo;
  double hi;
};

Bounds bounds_of(const ProbSpec& p) {
  if (const auto* x = std::get_if<PointProb>(&p)) return {x->p, x->p};
  if (const auto* r = std::get_if<RangeProb>(&p)) return {r->lo, r->hi};
  const auto& items = std::get<ProbList>(p).items;
  return {*std::min_element(items.begin(), items.end()),
          *std::max_element(items.begin(), items.end())};
}

void require_kind(const ActionDescription& a, std::initializer_list<ActionKind> allowed,
                  const char* method) {
  for (ActionKind k : allowed)
    if (a.kind == k) return;
  throw ValidationError(fmt::format("{} cannot take action '{}' of kind {}", method, a.name,
                                    kind_name(a.kind)));
}

void check_instances(std::span<const ActionDescription> instances) {
  if (instances.empty()) throw ValidationError("inter-action abstraction needs instances");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].duration != instances[0].duration)
      throw ValidationError(fmt::format("instances '{}' and '{}' have different durations",
                                        instances[0].name, instances[i].name));
    for (std::size_t j = 0; j < i; ++j)
      if (instances[i].name == instances[j].name && !(instances[i] == instances[j]))
        throw ValidationError("two different instances are named '" + instances[i].name + "'");
  }
}

}  // namespace

ActionDescription intra_abstract_I(const ActionDescription& a, const GroupingPlan& g,
                                   const Vocabulary& v) {
  require_kind(a, {ActionKind::Concrete, ActionKind::IntraI}, "intra Method I");
  validate_action(a, v);
  const std::span<const ActionDescription> one(&a, 1);
  validate_grouping(g, one, false);
  ActionDescription out{a.name, a.duration, {}, ActionKind::IntraI};
  for (const auto& group : g.groups) {
    std::vector<Sentence> conds;
    std::vector<double> probs;
    for (const auto& r : group) {
      const Branch& b = branch_of(one, r);
      if (const auto* list = std::get_if<ConditionList>(&b.condition)) {
        const auto& ps = std::get<ProbList>(b.prob).items;
        conds.insert(conds.end(), list->items.begin(), list->items.end());
        probs.insert(probs.end(), ps.begin(), ps.end());
      } else {
        conds.push_back(std::get<SingleCondition>(b.condition).sentence);
        probs.push_back(std::get<PointProb>(b.prob).p);
      }
    }
    Branch nb;
    nb.label = group_label(one, group);
    nb.effect = group_effect(one, group);
    const bool shared = std::all_of(conds.begin(), conds.end(), [&](const Sentence& c) {
      return equivalent(c, conds.front(), v);
    });
    if (shared) {
      double sum = 0.0;
      for (double p : probs) sum += p;
      nb.condition = SingleCondition{conds.front()};
      nb.prob = PointProb{std::min(sum, 1.0)};
    } else {
      nb.condition = ConditionList{std::move(conds)};
      nb.prob = ProbList{std::move(probs)};
    }
    out.branches.push_back(std::move(nb));
  }
  validate_action(out, v);
  return out;
}

ActionDescription intra_abstract_II(const ActionDescription& a, const GroupingPlan& g,
                                    const Vocabulary& v) {
  require_kind(a, {ActionKind::Concrete, ActionKind::IntraII}, "intra Method II");
  validate_action(a, v);
  const std::span<const ActionDescription> one(&a, 1);
  validate_grouping(g, one, false);
  ActionDescription out{a.name, a.duration, {}, ActionKind::IntraII};
  for (const auto& group : g.groups) {
    // Same-condition members are alternatives under one condition: merge
    // them by adding their bounds before taking the min/max.
    std::vector<Sentence> conds;
    std::vector<Bounds> bounds;
    for (const auto& r : group) {
      const Branch& b = branch_of(one, r);
      const Sentence& c = std::get<SingleCondition>(b.condition).sentence;
      const Bounds p = bounds_of(b.prob);
      std::size_t slot = conds.size();
      for (std::size_t i = 0; i < conds.size(); ++i)
        if (equivalent(conds[i], c, v)) slot = i;
      if (slot == conds.size()) {
        conds.push_back(c);
        bounds.push_back(p);
      } else {
        bounds[slot].lo += p.lo;
        bounds[slot].hi += p.hi;
      }
    }
    for (std::size_t i = 0; i < conds.size(); ++i)
      for (std::size_t j = i + 1; j < conds.size(); ++j)
        if (!entails(conds[i] && conds[j], Sentence::falsity(), v))
          throw ValidationError("intra Method II group '" + group_label(one, group) +
                                "' has overlapping conditions");
    Bounds range{std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& b : bounds) {
      range.lo = std::min(range.lo, std::min(b.lo, 1.0));
      range.hi = std::max(range.hi, std::min(b.hi, 1.0));
    }
    Branch nb;
    nb.label = group_label(one, group);
    nb.effect = group_effect(one, group);
    nb.condition = SingleCondition{Sentence::any_of(conds)};
    nb.prob = RangeProb{range.lo, range.hi};
    out.branches.push_back(std::move(nb));
  }
  validate_action(out, v);
  return out;
}

ActionDescription inter_abstract_I(std::span<const ActionDescription> instances,
                                   const GroupingPlan& g, const Vocabulary& v,
                                   const std::string& name) {
  check_instances(instances);
  for (const auto& a : instances) {
    require_kind(a, {ActionKind::Concrete}, "inter Method I");
    validate_action(a, v);
  }
  validate_grouping(g, instances, true);
  ActionDescription out{name, instances[0].duration, {}, ActionKind::InterI};
  for (const auto& group : g.groups) {
    ConditionList conds{std::vector<Sentence>(instances.size(), Sentence::falsity())};
    ProbList probs{std::vector<double>(instances.size(), 0.0)};
    for (const auto& r : group) {
      const Branch& b = branch_of(instances, r);
      conds.items[r.action] = std::get<SingleCondition>(b.condition).sentence;
      probs.items[r.action] = std::get<PointProb>(b.prob).p;
    }
    out.branches.push_back({group_label(instances, group), std::move(conds), std::move(probs),
                            group_effect(instances, group)});
  }
  validate_action(out, v);
  return out;
}

namespace {

struct Member {
  Sentence conj;
  Sentence disj;
  Bounds prob;
};

Member member_of(const Branch& b) {
  if (const auto* s = std::get_if<SingleCondition>(&b.condition))
    return {s->sentence, s->sentence, bounds_of(b.prob)};
  if (const auto* cd = std::get_if<ConjDisj>(&b.condition)) return {cd->conj, cd->disj, bounds_of(b.prob)};
  const auto& items = std::get<ConditionList>(b.condition).items;
  return {Sentence::all_of(items), Sentence::any_of(items), bounds_of(b.prob)};
}

}  // namespace

ActionDescription inter_abstract_II(std::span<const ActionDescription> instances,
                                    const GroupingPlan& g, const Vocabulary& v,
                                    const std::string& name) {
  check_instances(instances);
  for (const auto& a : instances) {
    require_kind(a, {ActionKind::Concrete, ActionKind::IntraII, ActionKind::InterI,
                     ActionKind::InterII},
                 "inter Method II");
    validate_action(a, v);
  }
  validate_grouping(g, instances, true);
  ActionDescription out{name, instances[0].duration, {}, ActionKind::InterII};
  for (const auto& group : g.groups) {
    std::vector<Sentence> conj;
    std::vector<Sentence> disj;
    Bounds range{std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& r : group) {
      const Member m = member_of(branch_of(instances, r));
      conj.push_back(m.conj);
      disj.push_back(m.disj);
      range.lo = std::min(range.lo, m.prob.lo);
      range.hi = std::max(range.hi, m.prob.hi);
    }
    if (group.size() < instances.size()) {
      // Implicit (FALSE, 0) partners.
      conj.push_back(Sentence::falsity());
      range.lo = 0.0;
    }
    out.branches.push_back({group_label(instances, group),
                            ConjDisj{Sentence::all_of(conj), Sentence::any_of(disj)},
                            RangeProb{range.lo, range.hi}, group_effect(instances, group)});
  }
  validate_action(out, v);
  return out;
}

ActionDescription abstract_actions(Method m, std::span<const ActionDescription> instances,
                                   const GroupingPlan& g, const Vocabulary& v,
                                   const std::string& name) {
  if (!is_inter(m)) {
    if (instances.size() != 1)
      throw ValidationError(std::string(method_name(m)) + " abstracts exactly one action");
    ActionDescription out = m == Method::IntraI ? intra_abstract_I(instances[0], g, v)
                                                : intra_abstract_II(instances[0], g, v);
    if (!name.empty()) out.name = name;
    return out;
  }
  return m == Method::InterI ? inter_abstract_I(instances, g, v, name)
                             : inter_abstract_II(instances, g, v, name);
}

ConjDisj weaken_condition_pair(const ConjDisj& cd, const Sentence& new_conj,
                               const Sentence& new_disj, const Vocabulary& v) {
  if (!entails(new_conj, cd.conj, v))
    throw ValidationError("the new conjunction does not entail the old one");
  if (!entails(cd.disj, new_disj, v))
    throw ValidationError("the new disjunction is not entailed by the old one");
  if (!entails(new_conj, new_disj, v))
    throw ValidationError("the new conjunction does not entail the new disjunction");
  return {new_conj, new_disj};
}

}  // namespace pact
