#include "pact/oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "pact/projection.hpp"

namespace pact {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kTolerance = 1e-9;

/// The post-state of a deterministic concrete effect, computed directly
/// from the constraint fields.
State apply_deterministic(const State& s, const EffectSpec& e, const Vocabulary& v) {
  std::vector<Value> out = s.values();
  for (const auto& [f, c] : e.entries()) {
    if (c.keeps_current() && !c.is_unchanged())
      throw ValidationError("concrete effect may keep the current value");
    switch (c.core()) {
      case Constraint::Core::None: break;
      case Constraint::Core::Absolute:
        if (c.values().size() != 1) throw ValidationError("concrete effect with several values");
        out[f] = c.values().front();
        break;
      case Constraint::Core::Relative:
        if (c.delta_lo() != c.delta_hi()) throw ValidationError("concrete effect with a delta range");
        out[f] = s[f] + c.delta_lo();
        break;
      case Constraint::Core::Any: throw ValidationError("concrete effect assigns any value");
    }
    if (!v.fluent(f).domain.contains(out[f]))
      throw DomainOverflowError(v.fluent(f).name, "outcome leaves the domain of " + v.fluent(f).name);
  }
  return State(std::move(out));
}

const Sentence& single_condition(const Branch& b) {
  const auto* c = std::get_if<SingleCondition>(&b.condition);
  if (!c) throw ValidationError("concrete branch '" + b.label + "' without a single condition");
  return c->sentence;
}

double point_prob(const Branch& b) {
  const auto* p = std::get_if<PointProb>(&b.prob);
  if (!p) throw ValidationError("concrete branch '" + b.label + "' without a point probability");
  return p->p;
}

/// Transition weights of one concrete action under d0.
std::map<Transition, double> concrete_transitions(const ActionDescription& a, const Vocabulary& v,
                                                  const StateDistribution& d0) {
  std::map<Transition, double> out;
  for (const auto& [s, p] : d0.entries()) {
    bool fired = false;
    for (const auto& b : a.branches) {
      if (!single_condition(b).holds(s)) continue;
      fired = true;
      const double w = p * point_prob(b);
      if (w == 0.0) continue;
      out[Transition{s, apply_deterministic(s, b.effect, v)}] += w;
    }
    if (!fired) throw IncompletenessError("no branch of " + a.name + " applies in " + v.describe(s));
  }
  return out;
}

std::string describe_transitions(const std::vector<Transition>& all, std::uint64_t mask,
                                 const Vocabulary& v) {
  if (mask == 0) return "FALSE";
  std::string out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!(mask >> i & 1u)) continue;
    if (!out.empty()) out += " | ";
    out += "(" + v.describe(all[i].start) + " -> " + v.describe(all[i].end) + ")";
  }
  return out;
}

/// The union of the transitions of several projections, with each
/// projection's index map into it.
struct TransitionUnion {
  std::vector<Transition> all;
  std::map<Transition, std::size_t> index;

  std::size_t add(const Transition& t) {
    auto [it, inserted] = index.emplace(t, all.size());
    if (inserted) all.push_back(t);
    return it->second;
  }
  std::vector<std::size_t> add_all(const std::vector<Transition>& ts) {
    std::vector<std::size_t> out;
    for (const auto& t : ts) out.push_back(add(t));
    return out;
  }
};

std::vector<bool> select(const std::vector<std::size_t>& map, std::uint64_t mask) {
  std::vector<bool> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = mask >> map[i] & 1u;
  return out;
}

VerificationFailure failure(const VerificationCase& c, std::string description) {
  VerificationFailure f;
  f.case_id = c.id;
  f.seed = c.seed;
  f.method = method_name(c.method);
  f.description = std::move(description);
  return f;
}

std::size_t transition_count(const VerificationCase& c, const ActionDescription& abstract) {
  TransitionUnion r;
  r.add_all(PreparedProjection(abstract, c.vocabulary, c.initial).transitions());
  for (const auto& a : c.concrete)
    for (const auto& [t, w] : concrete_transitions(a, c.vocabulary, c.initial)) r.add(t);
  return r.all.size();
}

ActionDescription build(const VerificationCase& c) {
  return abstract_actions(c.method, c.instances, c.grouping, c.vocabulary, "abstract");
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void VerificationReport::merge(const VerificationReport& other) {
  cases_run += other.cases_run;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  elapsed_seconds += other.elapsed_seconds;
}

std::vector<Sentence> all_sentences(const Vocabulary& v) {
  if (v.state_count() > 16) throw BoundError("more than 16 states");
  const auto states = v.states();
  std::vector<Sentence> describe;
  for (const auto& s : states) {
    std::vector<Sentence> atoms;
    for (std::size_t f = 0; f < v.size(); ++f) atoms.push_back(Sentence::equals(f, s[f]));
    describe.push_back(Sentence::all_of(atoms));
  }
  std::vector<Sentence> out;
  const std::uint64_t subsets = std::uint64_t{1} << states.size();
  out.reserve(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<Sentence> parts;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (mask >> i & 1u) parts.push_back(describe[i]);
    out.push_back(Sentence::any_of(parts));
  }
  return out;
}

VerificationReport check_abstraction(const VerificationCase& c) {
  const auto start = Clock::now();
  ActionDescription abstract;
  try {
    abstract = build(c);
  } catch (const Error& e) {
    VerificationReport r;
    r.cases_run = 1;
    r.failures.push_back(failure(c, std::string("construction failed: ") + e.what()));
    r.elapsed_seconds = seconds_since(start);
    return r;
  }
  auto r = check_abstract_action(c, abstract);
  r.elapsed_seconds = seconds_since(start);
  return r;
}

VerificationReport check_abstract_action(const VerificationCase& c,
                                         const ActionDescription& abstract) {
  const auto start = Clock::now();
  VerificationReport report;
  report.cases_run = 1;
  try {
    const PreparedProjection prepared(abstract, c.vocabulary, c.initial);
    TransitionUnion r;
    const auto abstract_map = r.add_all(prepared.transitions());
    std::vector<std::vector<std::pair<std::size_t, double>>> weights;
    for (const auto& a : c.concrete) {
      auto& w = weights.emplace_back();
      for (const auto& [t, p] : concrete_transitions(a, c.vocabulary, c.initial))
        w.emplace_back(r.add(t), p);
    }
    if (r.all.size() > kMaxCheckedTransitions)
      throw BoundError(fmt::format("{} transitions exceed the exhaustive check", r.all.size()));

    const std::uint64_t subsets = std::uint64_t{1} << r.all.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      const auto interval = prepared.evaluate(select(abstract_map, mask)).interval;
      for (std::size_t k = 0; k < c.concrete.size(); ++k) {
        double value = 0.0;
        for (const auto& [i, p] : weights[k])
          if (mask >> i & 1u) value += p;
        if (value >= interval.lo() - kTolerance && value <= interval.hi() + kTolerance) continue;
        if (report.failures.size() >= 8) break;
        auto f = failure(c, fmt::format("{}: {}", c.concrete[k].name,
                                        describe_transitions(r.all, mask, c.vocabulary)));
        f.concrete_value = value;
        f.lo = interval.lo();
        f.hi = interval.hi();
        report.failures.push_back(std::move(f));
      }
    }
  } catch (const Error& e) {
    report.failures.push_back(failure(c, std::string("check failed: ") + e.what()));
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

std::uint64_t case_seed(std::uint64_t run_seed, Method m, int id) {
  return splitmix(splitmix(run_seed ^ (static_cast<std::uint64_t>(m) + 1) * 0x100000001b3ULL) +
                  static_cast<std::uint64_t>(id));
}

VerificationCase random_case(Method m, std::uint64_t seed, int id) {
  Rng rng(seed);
  for (int attempt = 0;; ++attempt) {
    VerificationCase c;
    c.id = id;
    c.seed = seed;
    c.method = m;
    // Fall back to tiny vocabularies if large draws keep getting rejected.
    c.vocabulary = attempt < 200 ? random_vocabulary(rng, 4, 4) : random_vocabulary(rng, 2, 2);
    c.initial = random_distribution(rng, c.vocabulary, 2);
    RandomActionOptions small;
    small.max_conditions = 2;
    small.max_branches_per_condition = 2;
    auto concrete = [&](const std::string& name, const RandomActionOptions& o) {
      auto a = random_concrete_action(rng, c.vocabulary, name, o);
      c.concrete.push_back(a);
      return a;
    };
    auto concretes = [&](int count) {
      std::vector<ActionDescription> out;
      for (int i = 0; i < count; ++i)
        out.push_back(concrete(fmt::format("a{}", c.concrete.size()), small));
      return out;
    };

    switch (m) {
      case Method::IntraI:
      case Method::IntraII: {
        RandomActionOptions o = small;
        o.max_branches_per_condition = 3;
        c.instances = {concrete("a0", o)};
        c.grouping = random_intra_grouping(rng, c.instances.front());
        break;
      }
      case Method::InterI:
        c.instances = concretes(uniform_int(rng, 2, 3));
        c.grouping = random_inter_grouping(rng, c.instances);
        break;
      case Method::InterII: {
        const int count = uniform_int(rng, 2, 3);
        for (int i = 0; i < count; ++i) {
          const int shape = uniform_int(rng, 0, 5);
          const std::string name = fmt::format("n{}", i);
          if (shape <= 2) {
            c.instances.push_back(concretes(1).front());
          } else if (shape == 3) {
            auto a = concretes(1).front();
            auto g = random_intra_grouping(rng, a);
            auto abs = intra_abstract_II(a, g, c.vocabulary);
            abs.name = name;
            c.instances.push_back(abs);
          } else {
            auto inner = concretes(2);
            auto g = random_inter_grouping(rng, inner);
            c.instances.push_back(shape == 4 ? inter_abstract_I(inner, g, c.vocabulary, name)
                                             : inter_abstract_II(inner, g, c.vocabulary, name));
          }
        }
        c.grouping = random_inter_grouping(rng, c.instances);
        break;
      }
    }
    try {
      if (transition_count(c, build(c)) <= kRandomCaseTransitions) return c;
    } catch (const Error&) {
      // A case that cannot even be built is still a case; the check reports it.
      return c;
    }
  }
}

VerificationReport verify_methods(std::span<const Method> methods, int cases,
                                  std::uint64_t seed) {
  const auto start = Clock::now();
  VerificationReport report;
  for (Method m : methods)
    for (int id = 0; id < cases; ++id)
      report.merge(check_abstraction(random_case(m, case_seed(seed, m, id), id)));
  report.elapsed_seconds = seconds_since(start);
  return report;
}

VerificationReport check_method_ordering(const VerificationCase& c) {
  const auto start = Clock::now();
  VerificationReport report;
  const bool inter = is_inter(c.method);
  if (c.instances.size() != c.concrete.size() ||
      !std::all_of(c.instances.begin(), c.instances.end(),
                   [](const ActionDescription& a) { return a.is_concrete(); }))
    return report;
  report.cases_run = 1;
  try {
    const auto one = abstract_actions(inter ? Method::InterI : Method::IntraI, c.instances,
                                      c.grouping, c.vocabulary, "abstract");
    const auto two = abstract_actions(inter ? Method::InterII : Method::IntraII, c.instances,
                                      c.grouping, c.vocabulary, "abstract");
    const PreparedProjection p1(one, c.vocabulary, c.initial);
    const PreparedProjection p2(two, c.vocabulary, c.initial);
    TransitionUnion r;
    const auto m1 = r.add_all(p1.transitions());
    const auto m2 = r.add_all(p2.transitions());
    if (r.all.size() > kMaxCheckedTransitions)
      throw BoundError(fmt::format("{} transitions exceed the exhaustive check", r.all.size()));
    const std::uint64_t subsets = std::uint64_t{1} << r.all.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      const auto i1 = p1.evaluate(select(m1, mask)).interval;
      const auto i2 = p2.evaluate(select(m2, mask)).interval;
      if (i2.contains(i1, kTolerance)) continue;
      if (report.failures.size() >= 8) break;
      auto f = failure(c, fmt::format("Method I [{}, {}] not inside Method II for {}", i1.lo(),
                                      i1.hi(), describe_transitions(r.all, mask, c.vocabulary)));
      f.lo = i2.lo();
      f.hi = i2.hi();
      report.failures.push_back(std::move(f));
    }
  } catch (const Error& e) {
    report.failures.push_back(failure(c, std::string("ordering check failed: ") + e.what()));
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::NarrowProbability: return "narrowed-probability";
    case Mutation::StrengthenEffect: return "strengthened-effect";
    case Mutation::DropDisjunct: return "dropped-disjunct";
  }
  return "?";
}

namespace {

double prob_upper(const ProbSpec& p) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PointProb>) return x.p;
        else if constexpr (std::is_same_v<T, ProbList>)
          return x.items.empty() ? 0.0 : *std::max_element(x.items.begin(), x.items.end());
        else return x.hi;
      },
      p);
}

std::optional<Sentence> drop_last_disjunct(const Sentence& s) {
  const auto& n = s.node();
  if (n.kind != Sentence::Node::Kind::Or || n.children.size() < 2) return std::nullopt;
  std::vector<Sentence> kept(n.children.begin(), n.children.end() - 1);
  return Sentence::any_of(kept);
}

}  // namespace

std::optional<ActionDescription> mutate(const ActionDescription& abstract, Mutation m,
                                        const Vocabulary& v) {
  ActionDescription out = abstract;
  switch (m) {
    case Mutation::NarrowProbability: {
      // Zero out the most probable branch.
      std::size_t best = out.branches.size();
      double best_p = 0.0;
      for (std::size_t i = 0; i < out.branches.size(); ++i) {
        const double p = prob_upper(out.branches[i].prob);
        if (p > best_p) best = i, best_p = p;
      }
      if (best == out.branches.size()) return std::nullopt;
      auto& prob = out.branches[best].prob;
      if (auto* list = std::get_if<ProbList>(&prob))
        std::fill(list->items.begin(), list->items.end(), 0.0);
      else if (std::holds_alternative<RangeProb>(prob))
        prob = RangeProb{0.0, 0.0};
      else
        prob = PointProb{0.0};
      return out;
    }
    case Mutation::StrengthenEffect: {
      for (auto& b : out.branches) {
        for (const auto& [f, c] : b.effect.entries()) {
          if (c.is_deterministic()) continue;
          const Domain& d = v.fluent(f).domain;
          Constraint strong;
          if (c.core() == Constraint::Core::Relative) strong = Constraint::relative(c.delta_hi());
          else if (c.core() == Constraint::Core::Absolute) strong = Constraint::exact(c.values().back());
          else strong = Constraint::exact(d.max());
          b.effect.set(f, strong);
          return out;
        }
      }
      // Everything deterministic: move one assignment to another value.
      for (auto& b : out.branches) {
        for (const auto& [f, c] : b.effect.entries()) {
          if (c.core() != Constraint::Core::Absolute) continue;
          const Domain& d = v.fluent(f).domain;
          const Value moved = c.values().front() == d.max() ? d.min() : c.values().front() + 1;
          b.effect.set(f, Constraint::exact(moved));
          return out;
        }
      }
      return std::nullopt;
    }
    case Mutation::DropDisjunct: {
      for (auto& b : out.branches) {
        if (auto* single = std::get_if<SingleCondition>(&b.condition)) {
          if (auto s = drop_last_disjunct(single->sentence)) {
            single->sentence = *s;
            return out;
          }
        } else if (auto* cd = std::get_if<ConjDisj>(&b.condition)) {
          if (auto s = drop_last_disjunct(cd->disj)) {
            // Keep the pair consistent: the conjunction entails the weaker
            // disjunction only if it is itself weakened.
            cd->disj = *s;
            cd->conj = cd->conj && *s;
            return out;
          }
        } else if (auto* list = std::get_if<ConditionList>(&b.condition)) {
          for (auto& item : list->items) {
            if (auto s = drop_last_disjunct(item)) {
              item = *s;
              return out;
            }
          }
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double brute_force_expected_utility(std::span<const ActionDescription* const> plan,
                                    const Vocabulary& v, const StateDistribution& d0,
                                    const UtilityFunction& u) {
  std::map<State, double> current;
  for (const auto& [s, p] : d0.entries()) current[s] += p;
  int elapsed = 0;
  for (const ActionDescription* a : plan) {
    std::map<State, double> next;
    for (const auto& [s, p] : current) {
      bool fired = false;
      for (const auto& b : a->branches) {
        if (!single_condition(b).holds(s)) continue;
        fired = true;
        const double w = p * point_prob(b);
        if (w > 0.0) next[apply_deterministic(s, b.effect, v)] += w;
      }
      if (!fired) throw IncompletenessError("no branch of " + a->name + " applies in " + v.describe(s));
    }
    current = std::move(next);
    elapsed += a->duration;
  }
  double eu = 0.0;
  for (const auto& [s, p] : current) eu += p * u.evaluate(s, elapsed);
  return eu;
}

VerificationReport check_planner(const Network& net, const std::string& root,
                                 std::uint64_t limit) {
  const auto start = Clock::now();
  VerificationReport report;
  report.cases_run = 1;
  const auto plans = net.concrete_plans(root, limit);

  std::vector<double> eus;
  for (const auto& plan : plans) {
    const auto actions = net.plan_actions(plan);
    eus.push_back(brute_force_expected_utility(actions, net.vocabulary(), net.initial(),
                                               net.utility()));
  }
  const double best = *std::max_element(eus.begin(), eus.end());
  std::set<std::vector<std::string>> expected;
  for (std::size_t i = 0; i < plans.size(); ++i)
    if (eus[i] >= best - kTieEpsilon) expected.insert(plans[i]);

  const auto result = search(net, root);
  std::set<std::vector<std::string>> found;
  for (const auto& p : result.optimal) {
    found.insert(p.steps);
    if (std::abs(p.eu.lo - best) > 1e-6 || std::abs(p.eu.hi - best) > 1e-6) {
      VerificationFailure f;
      f.method = "planner";
      f.description = fmt::format("plan {} has expected utility [{}, {}]",
                                  fmt::join(p.steps, " "), p.eu.lo, p.eu.hi);
      f.concrete_value = best;
      f.lo = p.eu.lo;
      f.hi = p.eu.hi;
      report.failures.push_back(std::move(f));
    }
  }
  if (found != expected) {
    auto show = [](const std::set<std::vector<std::string>>& s) {
      std::vector<std::string> parts;
      for (const auto& p : s) parts.push_back(fmt::format("{}", fmt::join(p, " ")));
      return fmt::format("{{{}}}", fmt::join(parts, "; "));
    };
    VerificationFailure f;
    f.method = "planner";
    f.description = fmt::format("search found {} but exhaustive optimum is {}", show(found),
                                show(expected));
    f.concrete_value = best;
    report.failures.push_back(std::move(f));
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

}  // namespace pact
