#include "pact/actions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace pact {

Constraint Constraint::exact(Value v) { return among({v}); }

Constraint Constraint::among(std::vector<Value> values) {
  if (values.empty()) throw ValidationError("empty value set in effect");
  Constraint c;
  c.core_ = Core::Absolute;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  c.values_ = std::move(values);
  c.keep_ = false;
  return c;
}

Constraint Constraint::relative(Value delta) { return relative_range(delta, delta); }

Constraint Constraint::relative_range(Value lo, Value hi) {
  if (lo > hi) throw ValidationError(fmt::format("empty relative range [{}, {}]", lo, hi));
  Constraint c;
  c.core_ = Core::Relative;
  c.delta_lo_ = lo;
  c.delta_hi_ = hi;
  c.keep_ = false;
  c.normalize();
  return c;
}

Constraint Constraint::anything() {
  Constraint c;
  c.core_ = Core::Any;
  c.keep_ = false;
  return c;
}

Constraint Constraint::maybe_unchanged(const Constraint& inner) {
  Constraint c = inner;
  c.keep_ = true;
  c.normalize();
  return c;
}

void Constraint::normalize() {
  if (core_ == Core::Relative && delta_lo_ == 0 && delta_hi_ == 0) {
    core_ = Core::None;
    keep_ = true;
  }
  if (core_ == Core::None) keep_ = true;
  // The current value is already an outcome.
  if (keep_ && core_ == Core::Relative && delta_lo_ <= 0 && delta_hi_ >= 0) keep_ = false;
  if (keep_ && core_ == Core::Any) keep_ = false;
  if (core_ != Core::Absolute) values_.clear();
  if (core_ != Core::Relative) delta_lo_ = delta_hi_ = 0;
}

bool Constraint::is_deterministic() const {
  switch (core_) {
    case Core::None: return true;
    case Core::Absolute: return !keep_ && values_.size() == 1;
    case Core::Relative: return !keep_ && delta_lo_ == delta_hi_;
    case Core::Any: return false;
  }
  return false;
}

Constraint Constraint::inner() const {
  Constraint c = *this;
  if (c.core_ == Core::None) return c;
  c.keep_ = false;
  return c;
}

std::vector<Value> Constraint::outcomes(Value current, const Domain& d) const {
  std::vector<Value> out;
  switch (core_) {
    case Core::None:
      break;
    case Core::Absolute:
      for (Value v : values_)
        if (d.contains(v)) out.push_back(v);
      break;
    case Core::Relative: {
      const long long lo = std::max<long long>(static_cast<long long>(current) + delta_lo_, d.min());
      const long long hi = std::min<long long>(static_cast<long long>(current) + delta_hi_, d.max());
      for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<Value>(v));
      break;
    }
    case Core::Any:
      out = d.values();
      break;
  }
  if (keep_ && d.contains(current) && !std::binary_search(out.begin(), out.end(), current)) {
    out.insert(std::lower_bound(out.begin(), out.end(), current), current);
  }
  return out;
}

Constraint Constraint::join(const Constraint& other) const {
  Constraint out;
  out.keep_ = keep_ || other.keep_;
  const Core a = core_;
  const Core b = other.core_;
  if (a == Core::None) {
    out.core_ = b;
    out.values_ = other.values_;
    out.delta_lo_ = other.delta_lo_;
    out.delta_hi_ = other.delta_hi_;
  } else if (b == Core::None) {
    out.core_ = a;
    out.values_ = values_;
    out.delta_lo_ = delta_lo_;
    out.delta_hi_ = delta_hi_;
  } else if (a == Core::Any || b == Core::Any || a != b) {
    // Absolute and relative constraints have no common bound short of Any.
    out.core_ = Core::Any;
  } else if (a == Core::Absolute) {
    out.core_ = Core::Absolute;
    std::set_union(values_.begin(), values_.end(), other.values_.begin(),
                   other.values_.end(), std::back_inserter(out.values_));
  } else {
    out.core_ = Core::Relative;
    out.delta_lo_ = std::min(delta_lo_, other.delta_lo_);
    out.delta_hi_ = std::max(delta_hi_, other.delta_hi_);
  }
  out.normalize();
  return out;
}

bool Constraint::entails(const Constraint& other, const Domain& d) const {
  for (Value x : d.values()) {
    const auto mine = outcomes(x, d);
    const auto theirs = other.outcomes(x, d);
    if (!std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end())) return false;
  }
  return true;
}

void Constraint::validate(const Fluent& f) const {
  if (core_ == Core::Relative && f.domain.is_symbolic())
    throw ValidationError("relative effect on symbolic fluent '" + f.name + "'");
  if (core_ == Core::Absolute)
    for (Value v : values_)
      if (!f.domain.contains(v))
        throw ValidationError(fmt::format("effect value {} outside the domain of '{}'",
                                          f.domain.format(v), f.name));
}

EffectSpec& EffectSpec::set(std::size_t fluent, Constraint c) {
  if (c.is_unchanged())
    entries_.erase(fluent);
  else
    entries_[fluent] = std::move(c);
  return *this;
}

Constraint EffectSpec::get(std::size_t fluent) const {
  auto it = entries_.find(fluent);
  return it == entries_.end() ? Constraint::unchanged() : it->second;
}

bool EffectSpec::is_deterministic() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return e.second.is_deterministic(); });
}

EffectSpec EffectSpec::join(const EffectSpec& other) const {
  EffectSpec out;
  std::set<std::size_t> keys;
  for (const auto& [f, c] : entries_) keys.insert(f);
  for (const auto& [f, c] : other.entries_) keys.insert(f);
  for (std::size_t f : keys) out.set(f, get(f).join(other.get(f)));
  return out;
}

bool EffectSpec::entails(const EffectSpec& other, const Vocabulary& v) const {
  std::set<std::size_t> keys;
  for (const auto& [f, c] : entries_) keys.insert(f);
  for (const auto& [f, c] : other.entries_) keys.insert(f);
  for (std::size_t f : keys)
    if (!get(f).entails(other.get(f), v.fluent(f).domain)) return false;
  return true;
}

void EffectSpec::validate(const Vocabulary& v) const {
  for (const auto& [f, c] : entries_) {
    if (f >= v.size()) throw ValidationError("effect references a fluent outside the vocabulary");
    c.validate(v.fluent(f));
  }
}

const char* kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::Concrete: return "concrete";
    case ActionKind::IntraI: return "intra1";
    case ActionKind::IntraII: return "intra2";
    case ActionKind::InterI: return "inter1";
    case ActionKind::InterII: return "inter2";
  }
  return "?";
}

std::optional<ActionKind> parse_kind(std::string_view name) {
  for (ActionKind k : {ActionKind::Concrete, ActionKind::IntraI, ActionKind::IntraII,
                       ActionKind::InterI, ActionKind::InterII})
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

const Branch* ActionDescription::find_branch(std::string_view label) const {
  for (const auto& b : branches)
    if (b.label == label) return &b;
  return nullptr;
}

namespace {

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::string fmt_prob(double p) { return fmt::format("{:g}", p); }

}  // namespace

std::vector<std::string> validate_concrete(const ActionDescription& a,
                                           const Vocabulary& v) {
  std::vector<std::string> report;
  if (a.branches.empty()) report.push_back("action has no branches");
  if (a.duration < 0) report.push_back("negative duration");

  // Distinct conditions (by equivalence) with their branch indices.
  std::vector<Sentence> conditions;
  std::vector<std::vector<std::size_t>> members;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    const Branch& b = a.branches[i];
    if (!labels.insert(b.label).second)
      report.push_back("duplicate branch label '" + b.label + "'");
    const auto* cond = std::get_if<SingleCondition>(&b.condition);
    const auto* prob = std::get_if<PointProb>(&b.prob);
    if (!cond || !prob) {
      report.push_back("branch '" + b.label + "' is not a single condition with a point probability");
      continue;
    }
    try {
      cond->sentence.validate(v);
      b.effect.validate(v);
    } catch (const ValidationError& e) {
      report.push_back("branch '" + b.label + "': " + e.what());
      continue;
    }
    if (!valid_probability(prob->p))
      report.push_back("branch '" + b.label + "' probability " + fmt_prob(prob->p) + " outside [0,1]");
    if (!b.effect.is_deterministic())
      report.push_back("branch '" + b.label + "' has a non-deterministic effect");
    std::size_t slot = conditions.size();
    for (std::size_t c = 0; c < conditions.size(); ++c)
      if (equivalent(conditions[c], cond->sentence, v)) {
        slot = c;
        break;
      }
    if (slot == conditions.size()) {
      conditions.push_back(cond->sentence);
      members.emplace_back();
    }
    members[slot].push_back(i);
  }

  for (std::size_t c = 0; c < conditions.size(); ++c) {
    // Padding branches: unsatisfiable condition, probability zero.
    if (entails(conditions[c], Sentence::falsity(), v)) {
      for (std::size_t i : members[c])
        if (std::get<PointProb>(a.branches[i].prob).p != 0.0)
          report.push_back("branch '" + a.branches[i].label +
                           "' has an unsatisfiable condition but non-zero probability");
      continue;
    }
    double total = 0.0;
    for (std::size_t i : members[c]) total += std::get<PointProb>(a.branches[i].prob).p;
    if (std::abs(total - 1.0) > kProbTolerance)
      report.push_back(fmt::format("probabilities under condition '{}' sum to {} instead of 1",
                                   conditions[c].to_string(v), fmt_prob(total)));
    for (std::size_t x = 0; x < members[c].size(); ++x)
      for (std::size_t y = x + 1; y < members[c].size(); ++y) {
        const Branch& bx = a.branches[members[c][x]];
        const Branch& by = a.branches[members[c][y]];
        if (bx.effect == by.effect)
          report.push_back("branches '" + bx.label + "' and '" + by.label +
                           "' share a condition and an effect");
      }
  }

  for (std::size_t x = 0; x < conditions.size(); ++x)
    for (std::size_t y = x + 1; y < conditions.size(); ++y)
      if (entails(conditions[x] && conditions[y], Sentence::falsity(), v) == false)
        report.push_back("conditions '" + conditions[x].to_string(v) + "' and '" +
                         conditions[y].to_string(v) + "' overlap");
  if (!conditions.empty() &&
      !entails(Sentence::truth(), Sentence::any_of(conditions), v))
    report.push_back("conditions are not exhaustive");
  return report;
}

void validate_action(const ActionDescription& a, const Vocabulary& v) {
  if (a.is_concrete()) {
    auto report = validate_concrete(a, v);
    if (!report.empty())
      throw ValidationError("action '" + a.name + "': " + report.front());
    return;
  }
  auto fail = [&](const Branch& b, const std::string& msg) {
    throw ValidationError("action '" + a.name + "' branch '" + b.label + "': " + msg);
  };
  if (a.branches.empty()) throw ValidationError("action '" + a.name + "' has no branches");
  if (a.duration < 0) throw ValidationError("action '" + a.name + "' has a negative duration");
  std::optional<std::size_t> list_length;
  for (const auto& b : a.branches) {
    try {
      b.effect.validate(v);
    } catch (const ValidationError& e) {
      fail(b, e.what());
    }
    const bool single = std::holds_alternative<SingleCondition>(b.condition);
    const bool list = std::holds_alternative<ConditionList>(b.condition);
    const bool cd = std::holds_alternative<ConjDisj>(b.condition);
    const bool point = std::holds_alternative<PointProb>(b.prob);
    const bool plist = std::holds_alternative<ProbList>(b.prob);
    const bool range = std::holds_alternative<RangeProb>(b.prob);
    bool ok = false;
    switch (a.kind) {
      case ActionKind::IntraI: ok = (single && point) || (list && plist); break;
      case ActionKind::IntraII: ok = single && (point || range); break;
      case ActionKind::InterI: ok = list && plist; break;
      case ActionKind::InterII: ok = (single && (point || range)) || (cd && range); break;
      case ActionKind::Concrete: break;
    }
    if (!ok) fail(b, std::string("annotation not allowed for kind ") + kind_name(a.kind));

    if (const auto* s = std::get_if<SingleCondition>(&b.condition)) s->sentence.validate(v);
    if (const auto* c = std::get_if<ConjDisj>(&b.condition)) {
      c->conj.validate(v);
      c->disj.validate(v);
      if (!entails(c->conj, c->disj, v)) fail(b, "conjunction does not entail disjunction");
    }
    if (const auto* p = std::get_if<PointProb>(&b.prob))
      if (!valid_probability(p->p)) fail(b, "probability outside [0,1]");
    if (const auto* r = std::get_if<RangeProb>(&b.prob))
      if (!valid_probability(r->lo) || !valid_probability(r->hi) || r->lo > r->hi)
        fail(b, "invalid probability range");
    if (list) {
      const auto& conds = std::get<ConditionList>(b.condition).items;
      const auto& probs = std::get<ProbList>(b.prob).items;
      if (conds.empty()) fail(b, "empty condition list");
      if (conds.size() != probs.size()) fail(b, "condition and probability lists differ in length");
      for (const auto& c : conds) c.validate(v);
      for (double p : probs)
        if (!valid_probability(p)) fail(b, "probability outside [0,1]");
      if (a.kind == ActionKind::InterI) {
        if (list_length && *list_length != conds.size())
          fail(b, "instance lists differ in length across branches");
        list_length = conds.size();
      }
    }
  }
}

ActionDescription merge_duplicate_effects(const ActionDescription& a, const Vocabulary& v) {
  ActionDescription out = a;
  out.branches.clear();
  for (const auto& b : a.branches) {
    const auto& cond = std::get<SingleCondition>(b.condition).sentence;
    Branch* target = nullptr;
    for (auto& existing : out.branches) {
      if (existing.effect == b.effect &&
          equivalent(std::get<SingleCondition>(existing.condition).sentence, cond, v)) {
        target = &existing;
        break;
      }
    }
    if (target) {
      std::get<PointProb>(target->prob).p += std::get<PointProb>(b.prob).p;
    } else {
      out.branches.push_back(b);
    }
  }
  return out;
}

ActionDescription pad_branches(const ActionDescription& a, std::size_t target_count) {
  if (target_count < a.branches.size())
    throw ValidationError(fmt::format("cannot pad action '{}' with {} branches down to {}",
                                      a.name, a.branches.size(), target_count));
  if (a.branches.empty()) throw ValidationError("cannot pad an action without branches");
  ActionDescription out = a;
  std::size_t n = 0;
  while (out.branches.size() < target_count) {
    Branch pad;
    pad.label = fmt::format("pad{}", ++n);
    pad.condition = SingleCondition{Sentence::falsity()};
    pad.prob = PointProb{0.0};
    pad.effect = a.branches.front().effect;
    out.branches.push_back(std::move(pad));
  }
  return out;
}

}  // namespace pact
