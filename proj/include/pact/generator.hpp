#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pact/abstraction.hpp"
#include "pact/actions.hpp"
#include "pact/domain.hpp"
#include "pact/planner.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
int uniform_int(Rng& rng, int lo, int hi);

/// 1 to max_fluents fluents, each with 2 to max_values values; roughly a
/// third are symbolic.
Vocabulary random_vocabulary(Rng& rng, int max_fluents, int max_values);

struct RandomActionOptions {
  int max_conditions = 3;
  int max_branches_per_condition = 3;
  int duration = 1;
  /// Allow relative effects; they are only used where they stay in domain.
  bool relative = true;
};

/// A valid concrete action: the states of a few fluents are split into
/// mutually exclusive cells, each with 1..max branches of distinct effects.
ActionDescription random_concrete_action(Rng& rng, const Vocabulary& v, const std::string& name,
                                         const RandomActionOptions& options = {});

/// Distribution over 1..max_support distinct random states.
StateDistribution random_distribution(Rng& rng, const Vocabulary& v, int max_support);

/// Random partition of the branches of one action.
GroupingPlan random_intra_grouping(Rng& rng, const ActionDescription& a);
/// Random partition taking at most one branch per instance per group.
GroupingPlan random_inter_grouping(Rng& rng, std::span<const ActionDescription> instances);

/// Uniform network: the root task has p choices, each choice has n
/// instances, instances above the last level are tasks of p choices, and the
/// last level's instances are concrete actions.
///
/// Random networks draw small random leaf actions, utilities and initial
/// distributions. Engineered networks give every leaf position its own
/// fluent, set to the base-n number spelled by the instance indices on the
/// path to it, with utilities decreasing in that number and weighted so
/// earlier positions dominate later ones: exactly one instance survives
/// each refinement.
DomainFile uniform_network(int n, int p, int k, std::uint64_t seed, bool engineered);

/// Random uniform network with at most `max_plans` concrete plans.
DomainFile random_network(Rng& rng, std::uint64_t max_plans);

}  // namespace pact
