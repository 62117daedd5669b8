#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pact/actions.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

struct BranchContribution {
  std::string label;
  ProbInterval interval;
};

struct ProjectionResult {
  Sentence query;
  ProbInterval interval;
  std::vector<BranchContribution> breakdown;
};

/// An action bound to an initial distribution, with the transitions each
/// branch can produce precomputed. Evaluating many queries against the same
/// (action, distribution) pair only re-tests the query on those transitions.
///
/// Per branch, a deterministic effect contributes the exact weight of the
/// prestates whose transition satisfies the query, scaled by the branch's
/// probability bounds. A set-valued effect contributes P_*(φ, S) or
/// P^*(φ, S) over its transition set S, times the bound on the probability
/// of reaching the branch. List annotations combine per kind: a dot product
/// for intra Method I, a min/max over instances for inter Method I.
class PreparedProjection {
 public:
  /// Validates `a` as its declared kind and enumerates the transitions.
  PreparedProjection(const ActionDescription& a, const Vocabulary& v,
                     const StateDistribution& d0);

  /// Distinct transitions any branch can produce, in a fixed order.
  const std::vector<Transition>& transitions() const { return transitions_; }

  /// Bounds when the query holds exactly on the transitions flagged in
  /// `truth` (indexed like transitions()).
  ProjectionResult evaluate(const std::vector<bool>& truth) const;
  ProjectionResult evaluate(const Sentence& phi) const;

  const ActionDescription& action() const { return action_; }

 private:
  struct Weighted {
    std::size_t transition;
    double weight;
  };
  struct BranchTerms {
    std::string label;
    bool exact = true;
    // Exact form: one weight vector per candidate; the lower bound takes the
    // minimum over lo_terms, the upper the maximum over hi_terms.
    std::vector<std::vector<Weighted>> lo_terms;
    std::vector<std::vector<Weighted>> hi_terms;
    // Set form: indices of S and the reach bounds.
    std::vector<std::size_t> members;
    double reach_lo = 0.0;
    double reach_hi = 0.0;
  };

  std::size_t intern(const Transition& t);

  ActionDescription action_;
  std::vector<Transition> transitions_;
  std::vector<BranchTerms> branches_;
};

/// Dispatches on the action's kind.
ProjectionResult project(const ActionDescription& a, const Vocabulary& v,
                         const StateDistribution& d0, const Sentence& phi);

/// The kind-specific entry points validate `a` as that kind first.
ProjectionResult project_concrete(const ActionDescription& a, const Vocabulary& v,
                                  const StateDistribution& d0, const Sentence& phi);
ProjectionResult project_abstract_intra_I(const ActionDescription& a, const Vocabulary& v,
                                          const StateDistribution& d0, const Sentence& phi);
ProjectionResult project_abstract_intra_II(const ActionDescription& a, const Vocabulary& v,
                                           const StateDistribution& d0, const Sentence& phi);
ProjectionResult project_abstract_inter_I(const ActionDescription& a, const Vocabulary& v,
                                          const StateDistribution& d0, const Sentence& phi);
ProjectionResult project_abstract_inter_II(const ActionDescription& a, const Vocabulary& v,
                                           const StateDistribution& d0, const Sentence& phi);

}  // namespace pact
