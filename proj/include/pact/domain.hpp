#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pact/actions.hpp"
#include "pact/planner.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

/// Everything a domain file declares.
///
/// The format is line oriented; `#` starts a comment.
///
///   fluent muddy : {T, F} = F
///   fluent fuel : 0..30 = 20
///   initial
///     0.5 snowing=T
///     0.5 snowing=F
///   end
///   action drive-home duration 2
///     branch a when TRUE prob 0.7 effect fuel -= 8
///     branch b when TRUE prob 0.3 effect fuel -= 6
///   end
///   abstraction drive method inter1 of mountain-road valley-road
///     group a i
///   end
///   decompose deliver = drive drive-home
///   utility fuel 0:0 30:30
///   utility elapsed 0:0 10:-5
///   root deliver
///   uniform 3 2 2
///
/// Fluents left out of an initial line take their default (or lowest)
/// value; without an initial block the distribution is the default state.
struct DomainFile {
  Vocabulary vocabulary;
  std::vector<Value> defaults;
  StateDistribution initial;
  std::vector<ActionDescription> actions;
  std::vector<ChoiceNode> abstractions;
  std::vector<TaskNode> tasks;
  UtilityFunction utility;
  std::string root;
  std::optional<UniformShape> uniform;

  const ActionDescription* find_action(std::string_view name) const;
  const ChoiceNode* find_abstraction(std::string_view name) const;
  Network network() const;

  bool operator==(const DomainFile&) const = default;
};

/// Throws ParseError for syntax problems and ValidationError for objects
/// that parse but violate a module invariant.
DomainFile parse_domain(std::string_view text);
DomainFile load_domain(const std::filesystem::path& path);
std::string serialize_domain(const DomainFile& d);

/// Sentence in domain-file syntax: atoms `fluent REL value` or
/// `fluent REL fluent [+|- n]`, terms suffixed `@start`/`@end` (default
/// end), connectives and/or/not (also &, |, !), TRUE, FALSE, parentheses.
Sentence parse_sentence(std::string_view text, const Vocabulary& v);

std::string format_condition(const ConditionSpec& c, const Vocabulary& v);
std::string format_prob(const ProbSpec& p);
std::string format_effect(const EffectSpec& e, const Vocabulary& v);
/// The action as an `action ... end` block.
std::string format_action(const ActionDescription& a, const Vocabulary& v);

}  // namespace pact
