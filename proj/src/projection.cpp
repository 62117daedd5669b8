#include "pact/projection.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "pact/chronicle.hpp"

namespace pact {

namespace {

struct Bounds {
  double lo;
  double hi;
};

Bounds prob_range(const ProbSpec& p) {
  if (const auto* x = std::get_if<PointProb>(&p)) return {x->p, x->p};
  const auto& r = std::get<RangeProb>(p);
  return {r.lo, r.hi};
}

/// Per-candidate (lo, hi) reach weights of one prestate for a branch. A
/// candidate is a single alternative, except for inter Method I lists where
/// each instance is one.
std::vector<Bounds> prestate_weights(ActionKind kind, const Branch& b, const State& s,
                                     double w) {
  if (const auto* c = std::get_if<SingleCondition>(&b.condition)) {
    if (!c->sentence.holds(s)) return {{0.0, 0.0}};
    const Bounds p = prob_range(b.prob);
    return {{p.lo * w, p.hi * w}};
  }
  if (const auto* c = std::get_if<ConjDisj>(&b.condition)) {
    const Bounds p = prob_range(b.prob);
    return {{c->conj.holds(s) ? p.lo * w : 0.0, c->disj.holds(s) ? p.hi * w : 0.0}};
  }
  const auto& conds = std::get<ConditionList>(b.condition).items;
  const auto& probs = std::get<ProbList>(b.prob).items;
  if (kind == ActionKind::IntraI) {
    double sum = 0.0;
    for (std::size_t k = 0; k < conds.size(); ++k)
      if (conds[k].holds(s)) sum += probs[k];
    return {{sum * w, sum * w}};
  }
  std::vector<Bounds> out;
  for (std::size_t k = 0; k < conds.size(); ++k) {
    const double q = conds[k].holds(s) ? probs[k] * w : 0.0;
    out.push_back({q, q});
  }
  return out;
}

}  // namespace

std::size_t PreparedProjection::intern(const Transition& t) {
  auto it = std::find(transitions_.begin(), transitions_.end(), t);
  if (it != transitions_.end()) return static_cast<std::size_t>(it - transitions_.begin());
  transitions_.push_back(t);
  return transitions_.size() - 1;
}

PreparedProjection::PreparedProjection(const ActionDescription& a, const Vocabulary& v,
                                       const StateDistribution& d0)
    : action_(a) {
  validate_action(a, v);
  const auto support = d0.support();
  const bool inter_lists = a.kind == ActionKind::InterI;
  for (const auto& b : a.branches) {
    BranchTerms terms;
    terms.label = b.label;
    terms.exact = b.effect.is_deterministic();
    std::size_t candidates = 1;
    if (inter_lists) candidates = std::get<ConditionList>(b.condition).items.size();
    terms.lo_terms.resize(candidates);
    terms.hi_terms.resize(candidates);
    std::vector<Bounds> reach(candidates, {0.0, 0.0});

    for (const auto& [pre, w] : support) {
      const auto weights = prestate_weights(a.kind, b, pre, w);
      bool reached = false;
      for (std::size_t k = 0; k < candidates; ++k) {
        reach[k].lo += weights[k].lo;
        reach[k].hi += weights[k].hi;
        reached = reached || weights[k].hi > 0.0;
      }
      if (!reached) continue;
      std::vector<State> posts;
      try {
        posts = apply_effect(pre, b.effect, v);
      } catch (const DomainOverflowError&) {
        if (a.is_concrete()) throw;
        continue;  // no instance can take this branch from `pre`
      }
      if (terms.exact) {
        const std::size_t t = intern({pre, posts.front()});
        for (std::size_t k = 0; k < candidates; ++k) {
          if (weights[k].lo > 0.0) terms.lo_terms[k].push_back({t, weights[k].lo});
          if (weights[k].hi > 0.0) terms.hi_terms[k].push_back({t, weights[k].hi});
        }
      } else {
        for (const auto& post : posts) terms.members.push_back(intern({pre, post}));
      }
    }
    if (!terms.exact) {
      terms.lo_terms.clear();
      terms.hi_terms.clear();
      terms.reach_lo = std::numeric_limits<double>::infinity();
      terms.reach_hi = 0.0;
      for (const auto& r : reach) {
        terms.reach_lo = std::min(terms.reach_lo, r.lo);
        terms.reach_hi = std::max(terms.reach_hi, r.hi);
      }
    }
    branches_.push_back(std::move(terms));
  }
}

ProjectionResult PreparedProjection::evaluate(const std::vector<bool>& truth) const {
  ProjectionResult out;
  double lo = 0.0;
  double hi = 0.0;
  auto total = [&](const std::vector<Weighted>& terms) {
    double sum = 0.0;
    for (const auto& t : terms)
      if (truth[t.transition]) sum += t.weight;
    return sum;
  };
  for (const auto& b : branches_) {
    double blo = 0.0;
    double bhi = 0.0;
    if (b.exact) {
      blo = std::numeric_limits<double>::infinity();
      for (const auto& terms : b.lo_terms) blo = std::min(blo, total(terms));
      for (const auto& terms : b.hi_terms) bhi = std::max(bhi, total(terms));
    } else if (!b.members.empty()) {
      const bool all = std::all_of(b.members.begin(), b.members.end(),
                                   [&](std::size_t i) { return truth[i]; });
      const bool any = std::any_of(b.members.begin(), b.members.end(),
                                   [&](std::size_t i) { return truth[i]; });
      blo = all ? b.reach_lo : 0.0;
      bhi = any ? b.reach_hi : 0.0;
    }
    lo += blo;
    hi += bhi;
    out.breakdown.push_back({b.label, ProbInterval::clamped(blo, bhi)});
  }
  out.interval = ProbInterval::clamped(lo, hi);
  return out;
}

ProjectionResult PreparedProjection::evaluate(const Sentence& phi) const {
  std::vector<bool> truth(transitions_.size());
  for (std::size_t i = 0; i < transitions_.size(); ++i) truth[i] = phi.holds(transitions_[i]);
  ProjectionResult out = evaluate(truth);
  out.query = phi;
  return out;
}

ProjectionResult project(const ActionDescription& a, const Vocabulary& v,
                         const StateDistribution& d0, const Sentence& phi) {
  phi.validate(v);
  return PreparedProjection(a, v, d0).evaluate(phi);
}

namespace {

ProjectionResult project_as(ActionKind kind, const ActionDescription& a, const Vocabulary& v,
                            const StateDistribution& d0, const Sentence& phi) {
  ActionDescription copy = a;
  copy.kind = kind;
  return project(copy, v, d0, phi);
}

}  // namespace

ProjectionResult project_concrete(const ActionDescription& a, const Vocabulary& v,
                                  const StateDistribution& d0, const Sentence& phi) {
  return project_as(ActionKind::Concrete, a, v, d0, phi);
}

ProjectionResult project_abstract_intra_I(const ActionDescription& a, const Vocabulary& v,
                                          const StateDistribution& d0, const Sentence& phi) {
  return project_as(ActionKind::IntraI, a, v, d0, phi);
}

ProjectionResult project_abstract_intra_II(const ActionDescription& a, const Vocabulary& v,
                                           const StateDistribution& d0, const Sentence& phi) {
  return project_as(ActionKind::IntraII, a, v, d0, phi);
}

ProjectionResult project_abstract_inter_I(const ActionDescription& a, const Vocabulary& v,
                                          const StateDistribution& d0, const Sentence& phi) {
  return project_as(ActionKind::InterI, a, v, d0, phi);
}

ProjectionResult project_abstract_inter_II(const ActionDescription& a, const Vocabulary& v,
                                           const StateDistribution& d0, const Sentence& phi) {
  return project_as(ActionKind::InterII, a, v, d0, phi);
}

}  // namespace pact
