#include "pact/chronicle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <set>

namespace pact {

namespace {

[[noreturn]] void overflow(const Vocabulary& v, std::size_t f) {
  throw DomainOverflowError(v.fluent(f).name,
                            "effect drives fluent '" + v.fluent(f).name + "' outside its domain");
}

}  // namespace

std::vector<State> apply_effect(const State& s, const EffectSpec& e, const Vocabulary& v) {
  std::vector<std::vector<Value>> choices(v.size());
  std::vector<std::size_t> varying;
  for (std::size_t f = 0; f < v.size(); ++f) {
    choices[f] = e.get(f).outcomes(s[f], v.fluent(f).domain);
    if (choices[f].empty()) overflow(v, f);
    if (choices[f].size() > 1) varying.push_back(f);
  }
  std::vector<Value> base(v.size());
  for (std::size_t f = 0; f < v.size(); ++f) base[f] = choices[f].front();
  if (varying.empty()) return {State(std::move(base))};
  std::vector<State> out;
  Envelope(std::move(choices)).for_each(varying, [&](const State& x) { out.push_back(x); });
  return out;
}

Envelope::Envelope(const State& s) {
  values_.reserve(s.size());
  for (Value x : s.values()) values_.push_back({x});
}

Envelope::Envelope(std::vector<std::vector<Value>> values) : values_(std::move(values)) {
  for (auto& vs : values_) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  }
}

bool Envelope::is_point() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const auto& vs) { return vs.size() == 1; });
}

State Envelope::state() const {
  std::vector<Value> out;
  out.reserve(values_.size());
  for (const auto& vs : values_) out.push_back(vs.front());
  return State(std::move(out));
}

bool Envelope::contains(const State& s) const {
  if (s.size() != values_.size()) return false;
  for (std::size_t f = 0; f < values_.size(); ++f)
    if (!std::binary_search(values_[f].begin(), values_[f].end(), s[f])) return false;
  return true;
}

bool Envelope::contains(const Envelope& other) const {
  if (other.values_.size() != values_.size()) return false;
  for (std::size_t f = 0; f < values_.size(); ++f)
    if (!std::includes(values_[f].begin(), values_[f].end(), other.values_[f].begin(),
                       other.values_[f].end()))
      return false;
  return true;
}

void Envelope::for_each(std::span<const std::size_t> varying,
                        const std::function<void(const State&)>& fn) const {
  std::vector<Value> current(values_.size());
  for (std::size_t f = 0; f < values_.size(); ++f) current[f] = values_[f].front();
  std::vector<std::size_t> pos(varying.size(), 0);
  while (true) {
    fn(State(current));
    std::size_t i = varying.size();
    while (i > 0) {
      const std::size_t f = varying[i - 1];
      if (++pos[i - 1] < values_[f].size()) {
        current[f] = values_[f][pos[i - 1]];
        break;
      }
      pos[i - 1] = 0;
      current[f] = values_[f].front();
      --i;
    }
    if (i == 0) return;
  }
}

std::string Envelope::describe(const Vocabulary& v) const {
  std::string out;
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (f) out += ' ';
    const Domain& d = v.fluent(f).domain;
    out += v.fluent(f).name + "=";
    if (values_[f].size() == 1) {
      out += d.format(values_[f].front());
      continue;
    }
    out += '{';
    for (std::size_t i = 0; i < values_[f].size(); ++i) {
      if (i) out += ',';
      out += d.format(values_[f][i]);
    }
    out += '}';
  }
  return out;
}

Envelope apply_effect(const Envelope& e, const EffectSpec& effect, const Vocabulary& v) {
  std::vector<std::vector<Value>> out(e.size());
  for (std::size_t f = 0; f < e.size(); ++f) {
    const Constraint c = effect.get(f);
    if (c.is_unchanged()) {
      out[f] = e.values(f);
      continue;
    }
    std::set<Value> acc;
    for (Value x : e.values(f)) {
      const auto outs = c.outcomes(x, v.fluent(f).domain);
      acc.insert(outs.begin(), outs.end());
    }
    if (acc.empty()) overflow(v, f);
    out[f].assign(acc.begin(), acc.end());
  }
  return Envelope(std::move(out));
}

namespace {

struct Factor {
  double lo;
  double hi;
};

Factor prob_bounds(const ProbSpec& p) {
  if (const auto* x = std::get_if<PointProb>(&p)) return {x->p, x->p};
  if (const auto* r = std::get_if<RangeProb>(&p)) return {r->lo, r->hi};
  throw ValidationError("probability list without a condition list");
}

Factor state_factor(ActionKind kind, const Branch& b, const State& s) {
  if (const auto* c = std::get_if<SingleCondition>(&b.condition)) {
    if (!c->sentence.holds(s)) return {0.0, 0.0};
    return prob_bounds(b.prob);
  }
  if (const auto* c = std::get_if<ConjDisj>(&b.condition)) {
    const Factor p = prob_bounds(b.prob);
    if (c->conj.holds(s)) return p;
    if (c->disj.holds(s)) return {0.0, p.hi};
    return {0.0, 0.0};
  }
  const auto& conds = std::get<ConditionList>(b.condition).items;
  const auto& probs = std::get<ProbList>(b.prob).items;
  if (kind == ActionKind::IntraI) {
    // Dot product of condition indicators with probabilities.
    double sum = 0.0;
    for (std::size_t k = 0; k < conds.size(); ++k)
      if (conds[k].holds(s)) sum += probs[k];
    return {sum, sum};
  }
  // One entry per instance; the realized instance is unknown.
  Factor f{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t k = 0; k < conds.size(); ++k) {
    const double q = conds[k].holds(s) ? probs[k] : 0.0;
    f.lo = std::min(f.lo, q);
    f.hi = std::max(f.hi, q);
  }
  return f;
}

std::vector<std::size_t> condition_fluents(const ConditionSpec& c) {
  std::set<std::size_t> out;
  auto add = [&](const Sentence& s) {
    for (auto f : s.fluents()) out.insert(f);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleCondition>) {
          add(x.sentence);
        } else if constexpr (std::is_same_v<T, ConditionList>) {
          for (const auto& s : x.items) add(s);
        } else {
          add(x.conj);
          add(x.disj);
        }
      },
      c);
  return {out.begin(), out.end()};
}

}  // namespace

ProbInterval branch_factor(const ActionDescription& a, const Branch& b, const Envelope& e,
                           const Vocabulary& v) {
  (void)v;
  if (e.is_point()) {
    const Factor f = state_factor(a.kind, b, e.state());
    return ProbInterval::clamped(f.lo, f.hi);
  }
  const auto fluents = condition_fluents(b.condition);
  Factor acc{std::numeric_limits<double>::infinity(), 0.0};
  e.for_each(fluents, [&](const State& s) {
    const Factor f = state_factor(a.kind, b, s);
    acc.lo = std::min(acc.lo, f.lo);
    acc.hi = std::max(acc.hi, f.hi);
  });
  return ProbInterval::clamped(acc.lo, acc.hi);
}

double ChronicleSet::total_probability() const {
  double total = 0.0;
  for (const auto& c : chronicles) total += c.probability.lo();
  return total;
}

namespace {

using StepVisitor = std::function<void(std::span<const ChronicleStep> steps,
                                       const ProbInterval& probability,
                                       std::span<const TraceEntry> trace)>;

class Walker {
 public:
  Walker(std::span<const ActionDescription* const> plan, const Vocabulary& v,
         const StepVisitor& fn)
      : plan_(plan), vocab_(v), fn_(fn) {}

  void run(const StateDistribution& d0) {
    for (const auto& [state, w] : d0.support()) {
      steps_.push_back({0, Envelope(state)});
      descend(0, w, w);
      steps_.pop_back();
    }
  }

 private:
  void descend(std::size_t i, double lo, double hi) {
    if (i == plan_.size()) {
      fn_(steps_, ProbInterval::clamped(lo, hi), trace_);
      return;
    }
    const ActionDescription& a = *plan_[i];
    const std::size_t top = steps_.size() - 1;
    const int time = steps_[top].time + a.duration;
    bool fired = false;
    for (const auto& b : a.branches) {
      const ProbInterval f = branch_factor(a, b, steps_[top].state, vocab_);
      if (f.hi() <= 0.0) continue;
      fired = true;
      Envelope next = apply_effect(steps_[top].state, b.effect, vocab_);
      steps_.push_back({time, std::move(next)});
      trace_.push_back({a.name, b.label});
      descend(i + 1, lo * f.lo(), hi * f.hi());
      trace_.pop_back();
      steps_.pop_back();
    }
    if (!fired)
      throw IncompletenessError("state " + steps_.back().state.describe(vocab_) +
                                " satisfies no condition of action '" + a.name + "'");
  }

  std::span<const ActionDescription* const> plan_;
  const Vocabulary& vocab_;
  const StepVisitor& fn_;
  std::vector<ChronicleStep> steps_;
  std::vector<TraceEntry> trace_;
};

}  // namespace

void for_each_chronicle(
    std::span<const ActionDescription* const> plan, const Vocabulary& v,
    const StateDistribution& d0,
    const std::function<void(const Envelope&, int, const ProbInterval&,
                             std::span<const TraceEntry>)>& fn) {
  const StepVisitor visit = [&](std::span<const ChronicleStep> steps, const ProbInterval& p,
                                std::span<const TraceEntry> trace) {
    fn(steps.back().state, steps.back().time, p, trace);
  };
  Walker(plan, v, visit).run(d0);
}

ChronicleSet enumerate_chronicles(std::span<const ActionDescription* const> plan,
                                  const Vocabulary& v, const StateDistribution& d0) {
  if (plan.empty()) throw ValidationError("cannot enumerate chronicles of an empty plan");
  ChronicleSet out;
  const StepVisitor visit = [&](std::span<const ChronicleStep> steps, const ProbInterval& p,
                                std::span<const TraceEntry> trace) {
    out.chronicles.push_back(Chronicle{{steps.begin(), steps.end()}, p, {trace.begin(), trace.end()}});
  };
  Walker(plan, v, visit).run(d0);
  return out;
}

std::vector<const Chronicle*> sorted_by_trace(const ChronicleSet& set) {
  std::vector<const Chronicle*> out;
  for (const auto& c : set.chronicles) out.push_back(&c);
  std::stable_sort(out.begin(), out.end(), [](const Chronicle* a, const Chronicle* b) {
    if (a->trace != b->trace) return a->trace < b->trace;
    return a->steps.front().state.state() < b->steps.front().state.state();
  });
  return out;
}

}  // namespace pact
