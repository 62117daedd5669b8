#include "pact/generator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pact {

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

namespace {

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string branch_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return fmt::format("b{}", i);
}

/// Weights drawn from 1..9, normalized so they sum to one.
std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<int> w(n);
  for (auto& x : w) x = uniform_int(rng, 1, 9);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out(n);
  double used = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i] = w[i] / total;
    used += out[i];
  }
  out[n - 1] = std::max(0.0, 1.0 - used);
  return out;
}

std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

EffectSpec random_effect(Rng& rng, const Vocabulary& v, const std::vector<State>& cell,
                         bool relative) {
  EffectSpec e;
  for (std::size_t f = 0; f < v.size(); ++f) {
    if (!coin(rng, 0.45)) continue;
    const Domain& d = v.fluent(f).domain;
    if (relative && !d.is_symbolic() && coin(rng, 0.4)) {
      int delta = uniform_int(rng, -2, 2);
      if (delta == 0) delta = 1;
      const bool safe = std::all_of(cell.begin(), cell.end(), [&](const State& s) {
        return d.contains(s[f] + delta);
      });
      if (safe) {
        e.set(f, Constraint::relative(delta));
        continue;
      }
    }
    e.set(f, Constraint::exact(uniform_int(rng, d.min(), d.max())));
  }
  return e;
}

}  // namespace

Vocabulary random_vocabulary(Rng& rng, int max_fluents, int max_values) {
  const int count = uniform_int(rng, 1, max_fluents);
  std::vector<Fluent> fluents;
  for (int i = 0; i < count; ++i) {
    const int size = uniform_int(rng, 2, max_values);
    if (coin(rng, 0.33)) {
      std::vector<std::string> names;
      for (int s = 0; s < size; ++s) names.push_back(fmt::format("s{}", s));
      fluents.push_back({fmt::format("f{}", i), Domain::symbols(names)});
    } else {
      const int lo = uniform_int(rng, -1, 1);
      fluents.push_back({fmt::format("f{}", i), Domain::range(lo, lo + size - 1)});
    }
  }
  return Vocabulary(std::move(fluents));
}

ActionDescription random_concrete_action(Rng& rng, const Vocabulary& v, const std::string& name,
                                         const RandomActionOptions& options) {
  const std::size_t nf = std::min<std::size_t>(v.size(), 2);
  const auto cond_fluents = random_subset(rng, v.size(), static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(nf))));

  // Assignments of the condition fluents, split into non-empty cells.
  std::vector<State> combos;
  v.for_each_assignment(cond_fluents, v.first_state(), [&](const State& s) { combos.push_back(s); });
  const int cells = uniform_int(rng, 1, std::min<int>(options.max_conditions, static_cast<int>(combos.size())));
  std::vector<int> cell_of(combos.size());
  std::vector<std::size_t> order(combos.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < order.size(); ++i)
    cell_of[order[i]] = i < static_cast<std::size_t>(cells) ? static_cast<int>(i) : uniform_int(rng, 0, cells - 1);

  const auto all_states = v.states();
  ActionDescription a{name, options.duration, {}, ActionKind::Concrete};
  for (int c = 0; c < cells; ++c) {
    std::vector<Sentence> disjuncts;
    for (std::size_t i = 0; i < combos.size(); ++i) {
      if (cell_of[i] != c) continue;
      std::vector<Sentence> atoms;
      for (std::size_t f : cond_fluents) atoms.push_back(Sentence::equals(f, combos[i][f]));
      disjuncts.push_back(Sentence::all_of(atoms));
    }
    const Sentence cond = cells == 1 ? Sentence::truth() : Sentence::any_of(disjuncts);
    std::vector<State> cell;
    for (const auto& s : all_states)
      if (cond.holds(s)) cell.push_back(s);

    const int want = uniform_int(rng, 1, options.max_branches_per_condition);
    std::vector<EffectSpec> effects;
    for (int attempt = 0; attempt < 40 && static_cast<int>(effects.size()) < want; ++attempt) {
      EffectSpec e = random_effect(rng, v, cell, options.relative);
      if (std::find(effects.begin(), effects.end(), e) == effects.end()) effects.push_back(e);
    }
    const auto probs = random_simplex(rng, effects.size());
    for (std::size_t i = 0; i < effects.size(); ++i)
      a.branches.push_back({branch_label(a.branches.size()), SingleCondition{cond},
                            PointProb{probs[i]}, effects[i]});
  }
  validate_action(a, v);
  return a;
}

StateDistribution random_distribution(Rng& rng, const Vocabulary& v, int max_support) {
  const auto states = v.states();
  const std::size_t count = static_cast<std::size_t>(
      uniform_int(rng, 1, std::min<int>(max_support, static_cast<int>(states.size()))));
  const auto picks = random_subset(rng, states.size(), count);
  const auto probs = random_simplex(rng, count);
  std::vector<StateDistribution::Entry> entries;
  for (std::size_t i = 0; i < count; ++i) entries.emplace_back(states[picks[i]], probs[i]);
  return StateDistribution(v, std::move(entries));
}

GroupingPlan random_intra_grouping(Rng& rng, const ActionDescription& a) {
  const std::size_t n = a.branches.size();
  const std::size_t groups = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  GroupingPlan g;
  g.groups.resize(groups);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t slot = i < groups ? i : static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(groups) - 1));
    g.groups[slot].push_back({0, order[i]});
  }
  for (auto& group : g.groups)
    std::sort(group.begin(), group.end(),
              [](const BranchRef& x, const BranchRef& y) { return x.branch < y.branch; });
  return g;
}

GroupingPlan random_inter_grouping(Rng& rng, std::span<const ActionDescription> instances) {
  GroupingPlan g;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    std::vector<std::size_t> order(instances[k].branches.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> taken(g.groups.size(), false);
    for (std::size_t b : order) {
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < g.groups.size(); ++i)
        if (!taken[i]) open.push_back(i);
      const int pick = uniform_int(rng, 0, static_cast<int>(open.size()));
      if (pick == static_cast<int>(open.size())) {
        g.groups.push_back({{k, b}});
        taken.push_back(true);
      } else {
        g.groups[open[static_cast<std::size_t>(pick)]].push_back({k, b});
        taken[open[static_cast<std::size_t>(pick)]] = true;
      }
    }
  }
  return g;
}

namespace {

/// Builds the choice/task tree shared by random and engineered networks.
class UniformBuilder {
 public:
  UniformBuilder(int n, int p, int k, DomainFile& out) : n_(n), p_(p), k_(k), out_(out) {}

  /// Root task over p level-1 choices.
  void build() {
    TaskNode root{"root", {}};
    for (int j = 0; j < p_; ++j) root.steps.push_back(choice(1, fmt::format("{}", j + 1), j, {}));
    out_.tasks.push_back(std::move(root));
    out_.root = "root";
  }

  /// Called for each leaf action: plan position and the instance digits.
  std::function<ActionDescription(const std::string& name, int position,
                                  const std::vector<int>& digits)>
      make_leaf;
  std::function<Method(int level)> method_for;

 private:
  std::string choice(int level, const std::string& path, int position, std::vector<int> digits) {
    const std::string name = "A" + path;
    ChoiceNode node{name, {}, method_for(level), {}};
    for (int i = 0; i < n_; ++i) {
      auto d = digits;
      d.push_back(i);
      const std::string inst = fmt::format("{}_{}", path, i);
      if (level == k_) {
        out_.actions.push_back(make_leaf("a" + inst, position, d));
        node.instances.push_back("a" + inst);
      } else {
        TaskNode t{"T" + inst, {}};
        for (int j = 0; j < p_; ++j)
          t.steps.push_back(choice(level + 1, fmt::format("{}_{}", inst, j + 1), position * p_ + j, d));
        out_.tasks.push_back(std::move(t));
        node.instances.push_back("T" + inst);
      }
    }
    out_.abstractions.push_back(std::move(node));
    return name;
  }

  int n_, p_, k_;
  DomainFile& out_;
};

std::uint64_t int_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

DomainFile uniform_network(int n, int p, int k, std::uint64_t seed, bool engineered) {
  if (n < 1 || p < 1 || k < 1) throw ValidationError("n, p and k must be at least 1");
  DomainFile out;
  out.uniform = UniformShape{n, p, k};
  Rng rng(seed);
  if (engineered) {
    const std::uint64_t positions = int_pow(static_cast<std::uint64_t>(p), k);
    const std::uint64_t values = int_pow(static_cast<std::uint64_t>(n), k);
    if (positions > 64 || values > 4096 || values * positions > 4096)
      throw BoundError("engineered network too large");
    std::vector<Fluent> fluents;
    for (std::uint64_t q = 0; q < positions; ++q)
      fluents.push_back({fmt::format("x{}", q), Domain::range(0, static_cast<Value>(values - 1))});
    out.vocabulary = Vocabulary(fluents);
    out.defaults.assign(positions, 0);
    out.initial = StateDistribution::point(out.vocabulary, State(out.defaults));
    // Later positions weigh less than one unit of any earlier position can
    // make up for, even summed over all of them.
    const double ratio = static_cast<double>(values) + 1.0;
    for (std::uint64_t q = 0; q < positions; ++q) {
      const double w = std::pow(ratio, static_cast<double>(positions - 1 - q));
      out.utility.set_component(q, {{0.0, 0.0}, {static_cast<double>(values - 1), -w * static_cast<double>(values - 1)}});
    }
    UniformBuilder b(n, p, k, out);
    b.method_for = [](int) { return Method::InterI; };
    b.make_leaf = [&](const std::string& name, int position, const std::vector<int>& digits) {
      Value x = 0;
      for (int d : digits) x = x * n + d;
      EffectSpec e;
      e.set(static_cast<std::size_t>(position), Constraint::exact(x));
      return ActionDescription{name, 1, {{"a", SingleCondition{}, PointProb{1.0}, e}},
                               ActionKind::Concrete};
    };
    b.build();
    return out;
  }

  out.vocabulary = Vocabulary({{"a", Domain::range(0, 3)},
                               {"b", Domain::range(0, 3)},
                               {"c", Domain::symbols({"T", "F"})}});
  out.defaults = {0, 0, 1};
  out.initial = random_distribution(rng, out.vocabulary, 3);
  for (std::size_t f = 0; f < 2; ++f) {
    std::vector<UtilityFunction::Knot> knots{{0.0, static_cast<double>(uniform_int(rng, -5, 5))}};
    if (coin(rng, 0.5)) knots.push_back({1.5, static_cast<double>(uniform_int(rng, -5, 5))});
    knots.push_back({3.0, static_cast<double>(uniform_int(rng, -5, 5))});
    out.utility.set_component(f, knots);
  }
  out.utility.set_component(2, {{0.0, static_cast<double>(uniform_int(rng, -3, 3))},
                                {1.0, static_cast<double>(uniform_int(rng, -3, 3))}});
  RandomActionOptions opts;
  opts.max_conditions = 2;
  opts.max_branches_per_condition = 2;
  UniformBuilder b(n, p, k, out);
  b.method_for = [&](int level) {
    if (level < k) return Method::InterII;
    return coin(rng, 0.5) ? Method::InterI : Method::InterII;
  };
  b.make_leaf = [&](const std::string& name, int, const std::vector<int>&) {
    return random_concrete_action(rng, out.vocabulary, name, opts);
  };
  b.build();
  return out;
}

DomainFile random_network(Rng& rng, std::uint64_t max_plans) {
  std::vector<UniformShape> shapes;
  for (int n = 2; n <= 4; ++n)
    for (int p = 1; p <= 3; ++p)
      for (int k = 1; k <= 3; ++k)
        if (exhaustive_plan_count(n, p, k) <= max_plans) shapes.push_back({n, p, k});
  if (shapes.empty()) throw BoundError("no uniform shape fits the plan bound");
  const UniformShape s = shapes[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(shapes.size()) - 1))];
  return uniform_network(s.n, s.p, s.k, rng(), false);
}

}  // namespace pact
