#include "pact/planner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>

namespace pact {

namespace {

double interpolate(const std::vector<UtilityFunction::Knot>& knots, double x) {
  if (knots.empty()) return 0.0;
  if (x <= knots.front().x) return knots.front().u;
  if (x >= knots.back().x) return knots.back().u;
  auto hi = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const UtilityFunction::Knot& k) { return v < k.x; });
  auto lo = hi - 1;
  const double t = (x - lo->x) / (hi->x - lo->x);
  return lo->u + t * (hi->u - lo->u);
}

void check_knots(const std::vector<UtilityFunction::Knot>& knots, const std::string& what) {
  if (knots.empty()) throw ValidationError("utility component for " + what + " has no knots");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i].x > knots[i - 1].x))
      throw ValidationError("utility knots for " + what + " are not strictly increasing");
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    return std::numeric_limits<std::uint64_t>::max();
  return a + b;
}

}  // namespace

void UtilityFunction::set_component(std::size_t fluent, std::vector<Knot> knots) {
  components_[fluent] = std::move(knots);
}

void UtilityFunction::set_elapsed(std::vector<Knot> knots) { elapsed_ = std::move(knots); }

double UtilityFunction::evaluate(const State& s, int elapsed) const {
  double total = interpolate(elapsed_, elapsed);
  for (const auto& [f, knots] : components_) total += interpolate(knots, s[f]);
  return total;
}

std::pair<double, double> UtilityFunction::range(const Envelope& e, int elapsed) const {
  const double t = interpolate(elapsed_, elapsed);
  double lo = t;
  double hi = t;
  for (const auto& [f, knots] : components_) {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (Value x : e.values(f)) {
      const double u = interpolate(knots, x);
      fmin = std::min(fmin, u);
      fmax = std::max(fmax, u);
    }
    lo += fmin;
    hi += fmax;
  }
  return {lo, hi};
}

void UtilityFunction::validate(const Vocabulary& v) const {
  for (const auto& [f, knots] : components_) {
    if (f >= v.size()) throw ValidationError("utility references a fluent outside the vocabulary");
    check_knots(knots, "'" + v.fluent(f).name + "'");
  }
  if (!elapsed_.empty()) check_knots(elapsed_, "elapsed time");
}

Network::Network(Vocabulary vocab, StateDistribution initial, UtilityFunction utility,
                 std::vector<ActionDescription> actions, std::vector<ChoiceNode> choices,
                 std::vector<TaskNode> tasks, std::string root,
                 std::optional<UniformShape> uniform)
    : vocab_(std::move(vocab)),
      initial_(std::move(initial)),
      utility_(std::move(utility)),
      actions_(std::move(actions)),
      choices_(std::move(choices)),
      tasks_(std::move(tasks)),
      root_(std::move(root)),
      uniform_(uniform) {
  utility_.validate(vocab_);
  auto add = [&](const std::string& name, Type t, std::size_t i) {
    if (!index_.emplace(name, std::make_pair(t, i)).second)
      throw ValidationError("network node '" + name + "' is defined twice");
  };
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    validate_action(actions_[i], vocab_);
    add(actions_[i].name, Type::Action, i);
  }
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    if (choices_[i].instances.empty())
      throw ValidationError("abstraction '" + choices_[i].name + "' has no instances");
    add(choices_[i].name, Type::Choice, i);
  }
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].steps.empty())
      throw ValidationError("task '" + tasks_[i].name + "' has an empty decomposition");
    add(tasks_[i].name, Type::Task, i);
  }
  for (const auto& [name, entry] : index_) {
    std::vector<std::string> stack;
    build_summary(name, stack);
  }
  if (!root_.empty() && !has_node(root_)) throw ValidationError("unknown root '" + root_ + "'");
}

bool Network::has_node(const std::string& name) const { return index_.count(name) > 0; }

bool Network::is_choice(const std::string& name) const {
  auto it = index_.find(name);
  return it != index_.end() && it->second.first == Type::Choice;
}

bool Network::is_task(const std::string& name) const {
  auto it = index_.find(name);
  return it != index_.end() && it->second.first == Type::Task;
}

const ChoiceNode& Network::choice(const std::string& name) const {
  if (!is_choice(name)) throw ValidationError("'" + name + "' is not an abstraction");
  return choices_[index_.at(name).second];
}

const TaskNode& Network::task(const std::string& name) const {
  if (!is_task(name)) throw ValidationError("'" + name + "' is not a task");
  return tasks_[index_.at(name).second];
}

const ActionDescription& Network::action(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end() || it->second.first != Type::Action)
    throw ValidationError("'" + name + "' is not an action");
  return actions_[it->second.second];
}

const std::vector<ActionDescription>& Network::summary(const std::string& name) const {
  auto it = summaries_.find(name);
  if (it == summaries_.end()) throw ValidationError("unknown network node '" + name + "'");
  return it->second;
}

const std::vector<ActionDescription>& Network::build_summary(const std::string& name,
                                                             std::vector<std::string>& stack) {
  if (auto it = summaries_.find(name); it != summaries_.end()) return it->second;
  auto entry = index_.find(name);
  if (entry == index_.end()) throw ValidationError("unknown network node '" + name + "'");
  if (std::find(stack.begin(), stack.end(), name) != stack.end())
    throw ValidationError("network cycle through '" + name + "'");
  stack.push_back(name);
  std::vector<ActionDescription> out;
  const auto [type, i] = entry->second;
  if (type == Type::Action) {
    out.push_back(actions_[i]);
  } else if (type == Type::Task) {
    for (const auto& step : tasks_[i].steps) {
      const auto& s = build_summary(step, stack);
      out.insert(out.end(), s.begin(), s.end());
    }
  } else {
    const ChoiceNode& c = choices_[i];
    std::vector<std::vector<ActionDescription>> inputs;
    for (const auto& inst : c.instances) inputs.push_back(build_summary(inst, stack));
    const std::size_t length = inputs.front().size();
    for (const auto& s : inputs)
      if (s.size() != length)
        throw ValidationError("instances of '" + c.name + "' have summaries of different lengths");
    if (!is_inter(c.method) && (inputs.size() != 1 || length != 1))
      throw ValidationError("intra abstraction '" + c.name + "' needs a single action instance");
    for (std::size_t pos = 0; pos < length; ++pos) {
      std::vector<ActionDescription> column;
      bool all_concrete = true;
      for (const auto& s : inputs) {
        column.push_back(s[pos]);
        all_concrete = all_concrete && s[pos].is_concrete();
      }
      Method m = c.method;
      if (m == Method::InterI && !all_concrete) m = Method::InterII;
      GroupingPlan g = (length == 1 && !c.groups.empty()) ? grouping_from_labels(column, c.groups)
                       : is_inter(m)                      ? aligned_grouping(column)
                                                          : singleton_grouping(column.front());
      const std::string label = length == 1 ? c.name : fmt::format("{}/{}", c.name, pos + 1);
      out.push_back(abstract_actions(m, column, g, vocab_, label));
    }
  }
  stack.pop_back();
  return summaries_.emplace(name, std::move(out)).first->second;
}

std::vector<std::string> Network::expand(const std::string& name) const {
  if (!is_task(name)) {
    if (!has_node(name)) throw ValidationError("unknown network node '" + name + "'");
    return {name};
  }
  std::vector<std::string> out;
  for (const auto& step : task(name).steps) {
    auto sub = expand(step);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::uint64_t Network::concrete_plan_count(const std::string& name) const {
  if (is_choice(name)) {
    std::uint64_t total = 0;
    for (const auto& inst : choice(name).instances)
      total = saturating_add(total, concrete_plan_count(inst));
    return total;
  }
  if (is_task(name)) {
    std::uint64_t total = 1;
    for (const auto& step : task(name).steps)
      total = saturating_mul(total, concrete_plan_count(step));
    return total;
  }
  action(name);
  return 1;
}

std::vector<std::vector<std::string>> Network::concrete_plans(const std::string& name,
                                                              std::uint64_t limit) const {
  if (concrete_plan_count(name) > limit)
    throw BoundError(fmt::format("'{}' has more than {} concrete plans", name, limit));
  if (is_choice(name)) {
    std::vector<std::vector<std::string>> out;
    for (const auto& inst : choice(name).instances) {
      auto sub = concrete_plans(inst, limit);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (is_task(name)) {
    std::vector<std::vector<std::string>> out{{}};
    for (const auto& step : task(name).steps) {
      const auto sub = concrete_plans(step, limit);
      std::vector<std::vector<std::string>> next;
      for (const auto& prefix : out)
        for (const auto& tail : sub) {
          auto p = prefix;
          p.insert(p.end(), tail.begin(), tail.end());
          next.push_back(std::move(p));
        }
      out = std::move(next);
    }
    return out;
  }
  action(name);
  return {{name}};
}

std::vector<const ActionDescription*> Network::plan_actions(
    const std::vector<std::string>& steps) const {
  std::vector<const ActionDescription*> out;
  for (const auto& s : steps)
    for (const auto& a : summary(s)) out.push_back(&a);
  return out;
}

EuInterval expected_utility(std::span<const ActionDescription* const> plan,
                            const Vocabulary& v, const StateDistribution& d0,
                            const UtilityFunction& u) {
  const bool concrete = std::all_of(plan.begin(), plan.end(),
                                    [](const ActionDescription* a) { return a->is_concrete(); });
  if (concrete) {
    double eu = 0.0;
    for_each_chronicle(plan, v, d0,
                       [&](const Envelope& e, int elapsed, const ProbInterval& p,
                           std::span<const TraceEntry>) {
                         eu += p.lo() * u.evaluate(e.state(), elapsed);
                       });
    return {eu, eu};
  }
  struct Entry {
    double plo, phi, umin, umax;
  };
  std::vector<Entry> entries;
  for_each_chronicle(plan, v, d0,
                     [&](const Envelope& e, int elapsed, const ProbInterval& p,
                         std::span<const TraceEntry>) {
                       const auto [lo, hi] = u.range(e, elapsed);
                       entries.push_back({p.lo(), p.hi(), lo, hi});
                     });
  // Greedy solution of the two linear programs: start every chronicle at
  // its lower probability, then hand the remaining mass to the worst (for
  // the lower bound) or best (upper bound) utilities first.
  auto extreme = [&](bool upper) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return upper ? entries[a].umax > entries[b].umax : entries[a].umin < entries[b].umin;
    });
    double remaining = 1.0;
    for (const auto& e : entries) remaining -= e.plo;
    double total = 0.0;
    for (std::size_t i : order) {
      const Entry& e = entries[i];
      const double extra = std::clamp(remaining, 0.0, e.phi - e.plo);
      remaining -= extra;
      total += (e.plo + extra) * (upper ? e.umax : e.umin);
    }
    return total;
  };
  return {extreme(false), extreme(true)};
}

bool dominates(const CandidatePlan& a, const CandidatePlan& b) {
  return b.eu.hi < a.eu.lo - kTieEpsilon;
}

std::vector<CandidatePlan> refine(const CandidatePlan& plan, const Network& net) {
  auto it = std::find_if(plan.steps.begin(), plan.steps.end(),
                         [&](const std::string& s) { return net.is_choice(s); });
  if (it == plan.steps.end()) throw ValidationError("plan is fully concrete; nothing to refine");
  const std::size_t pos = static_cast<std::size_t>(it - plan.steps.begin());
  std::vector<CandidatePlan> out;
  for (const auto& inst : net.choice(*it).instances) {
    CandidatePlan child;
    child.steps.assign(plan.steps.begin(), plan.steps.begin() + pos);
    const auto sub = net.expand(inst);
    child.steps.insert(child.steps.end(), sub.begin(), sub.end());
    child.steps.insert(child.steps.end(), plan.steps.begin() + pos + 1, plan.steps.end());
    child.depth = plan.depth + 1;
    child.concrete = std::none_of(child.steps.begin(), child.steps.end(),
                                  [&](const std::string& s) { return net.is_choice(s); });
    out.push_back(std::move(child));
  }
  return out;
}

namespace {

EuInterval evaluate_steps(const Network& net, const std::vector<std::string>& steps) {
  const auto actions = net.plan_actions(steps);
  return expected_utility(actions, net.vocabulary(), net.initial(), net.utility());
}

/// Greatest eu.hi first, then shallower, then lexicographic steps.
bool better(const CandidatePlan& a, const CandidatePlan& b) {
  if (a.eu.hi != b.eu.hi) return a.eu.hi > b.eu.hi;
  if (a.depth != b.depth) return a.depth < b.depth;
  return a.steps < b.steps;
}

}  // namespace

SearchResult search(const Network& net, const std::string& root, const SearchOptions& options) {
  SearchResult result;
  SearchStats& stats = result.stats;
  stats.total_concrete_plans = net.concrete_plan_count(root);
  stats.uniform = net.uniform();

  auto evaluate = [&](CandidatePlan& p) {
    if (p.evaluated) return;
    p.eu = evaluate_steps(net, p.steps);
    p.evaluated = true;
    ++stats.plans_examined;
    if (p.concrete) ++stats.concrete_examined;
  };

  CandidatePlan start;
  start.steps = net.expand(root);
  start.concrete = std::none_of(start.steps.begin(), start.steps.end(),
                                [&](const std::string& s) { return net.is_choice(s); });
  std::vector<CandidatePlan> frontier{start};

  while (true) {
    if (frontier.size() >= 2 || frontier.front().concrete)
      for (auto& p : frontier) evaluate(p);

    if (frontier.size() >= 2) {
      double best_lo = -std::numeric_limits<double>::infinity();
      for (const auto& p : frontier) best_lo = std::max(best_lo, p.eu.lo);
      std::vector<CandidatePlan> kept;
      for (auto& p : frontier) {
        if (p.eu.hi < best_lo - kTieEpsilon) {
          ++stats.pruned_per_depth[p.depth];
          if (!p.concrete) ++stats.abstract_pruned;
        } else {
          kept.push_back(std::move(p));
        }
      }
      frontier = std::move(kept);
    }

    const CandidatePlan* pick = nullptr;
    for (const auto& p : frontier)
      if (!p.concrete && (!pick || better(p, *pick))) pick = &p;
    if (!pick) break;

    const std::size_t index = static_cast<std::size_t>(pick - frontier.data());
    CandidatePlan parent = std::move(frontier[index]);
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(index));
    auto children = refine(parent, net);
    if (options.record_refinements) {
      RefinementRecord rec;
      rec.parent = parent.steps;
      rec.parent_eu = parent.evaluated ? parent.eu : evaluate_steps(net, parent.steps);
      for (const auto& c : children) rec.children_eu.push_back(evaluate_steps(net, c.steps));
      result.refinements.push_back(std::move(rec));
    }
    for (auto& c : children) frontier.push_back(std::move(c));
  }

  std::sort(frontier.begin(), frontier.end(), [](const CandidatePlan& a, const CandidatePlan& b) {
    if (a.eu.lo != b.eu.lo) return a.eu.lo > b.eu.lo;
    return a.steps < b.steps;
  });
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : frontier) best = std::max(best, p.eu.lo);
  for (const auto& p : frontier)
    if (p.eu.lo >= best - kTieEpsilon) result.optimal.push_back(p);
  result.survivors = std::move(frontier);
  return result;
}

std::uint64_t maximal_pruning_bound(int n, int p, int k) {
  if (n < 1 || p < 1 || k < 1) throw ValidationError("n, p and k must be at least 1");
  std::uint64_t sum = 0;
  std::uint64_t power = 1;
  for (int i = 1; i <= k; ++i) {
    power = saturating_mul(power, static_cast<std::uint64_t>(p));
    sum = saturating_add(sum, power);
  }
  return saturating_mul(static_cast<std::uint64_t>(n), sum);
}

std::uint64_t exhaustive_plan_count(int n, int p, int k) {
  const std::uint64_t exponent = maximal_pruning_bound(1, p, k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    out = saturating_mul(out, static_cast<std::uint64_t>(n));
    if (out == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return out;
}

}  // namespace pact
