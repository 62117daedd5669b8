#include "pact/worldmodel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace pact {

Domain Domain::symbols(std::vector<std::string> names) {
  if (names.empty()) throw ValidationError("symbolic domain must be non-empty");
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size())
    throw ValidationError("symbolic domain has duplicate values");
  Domain d;
  d.lo_ = 0;
  d.hi_ = static_cast<Value>(names.size()) - 1;
  d.symbols_ = std::move(names);
  return d;
}

Domain Domain::range(Value lo, Value hi) {
  if (lo > hi)
    throw ValidationError(fmt::format("empty integer range {}..{}", lo, hi));
  Domain d;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

std::size_t Domain::size() const {
  return static_cast<std::size_t>(static_cast<long long>(hi_) - lo_ + 1);
}

std::vector<Value> Domain::values() const {
  std::vector<Value> out;
  out.reserve(size());
  for (Value v = lo_; v <= hi_; ++v) out.push_back(v);
  return out;
}

std::string Domain::format(Value v) const {
  if (is_symbolic() && contains(v)) return symbols_[static_cast<std::size_t>(v)];
  return std::to_string(v);
}

std::optional<Value> Domain::parse(std::string_view token) const {
  if (is_symbolic()) {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == token) return static_cast<Value>(i);
    return std::nullopt;
  }
  Value v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  if (!contains(v)) return std::nullopt;
  return v;
}

State State::with(std::size_t fluent, Value v) const {
  State copy = *this;
  copy.values_[fluent] = v;
  return copy;
}

Vocabulary::Vocabulary(std::vector<Fluent> fluents) : fluents_(std::move(fluents)) {
  std::set<std::string> names;
  for (const auto& f : fluents_) {
    if (f.name.empty()) throw ValidationError("fluent name must be non-empty");
    if (!names.insert(f.name).second)
      throw ValidationError("duplicate fluent '" + f.name + "'");
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < fluents_.size(); ++i)
    if (fluents_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Vocabulary::require(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw ValidationError(fmt::format("unknown fluent '{}'", name));
}

std::uint64_t Vocabulary::state_count() const {
  std::uint64_t n = 1;
  for (const auto& f : fluents_) {
    const std::uint64_t size = f.domain.size();
    if (n > std::numeric_limits<std::uint64_t>::max() / size)
      return std::numeric_limits<std::uint64_t>::max();
    n *= size;
  }
  return n;
}

bool Vocabulary::contains(const State& s) const {
  if (s.size() != fluents_.size()) return false;
  for (std::size_t i = 0; i < fluents_.size(); ++i)
    if (!fluents_[i].domain.contains(s[i])) return false;
  return true;
}

void Vocabulary::for_each_assignment(
    std::span<const std::size_t> varying, const State& base,
    const std::function<void(const State&)>& fn) const {
  std::vector<Value> values = base.values();
  for (std::size_t f : varying) values[f] = fluents_[f].domain.min();
  while (true) {
    fn(State(values));
    // Odometer increment, last varying fluent fastest.
    std::size_t i = varying.size();
    while (i > 0) {
      const std::size_t f = varying[i - 1];
      if (values[f] < fluents_[f].domain.max()) {
        ++values[f];
        break;
      }
      values[f] = fluents_[f].domain.min();
      --i;
    }
    if (i == 0) return;
  }
}

std::vector<State> Vocabulary::states(std::uint64_t limit) const {
  if (state_count() > limit)
    throw BoundError(fmt::format("vocabulary has {} states, limit is {}",
                                 state_count(), limit));
  std::vector<std::size_t> all(fluents_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(state_count()));
  for_each_assignment(all, first_state(),
                      [&](const State& s) { out.push_back(s); });
  return out;
}

State Vocabulary::first_state() const {
  std::vector<Value> values;
  values.reserve(fluents_.size());
  for (const auto& f : fluents_) values.push_back(f.domain.min());
  return State(std::move(values));
}

std::string Vocabulary::describe(const State& s) const {
  std::string out;
  for (std::size_t i = 0; i < fluents_.size(); ++i) {
    if (i) out += ' ';
    out += fluents_[i].name + "=" + fluents_[i].domain.format(s[i]);
  }
  return out;
}

std::vector<State> models(const Sentence& s, const Vocabulary& v) {
  s.validate(v);
  std::vector<State> out;
  for (const auto& state : v.states())
    if (s.holds(state)) out.push_back(state);
  return out;
}

namespace {

std::vector<std::size_t> union_fluents(const Sentence& a, const Sentence& b) {
  auto fa = a.fluents();
  auto fb = b.fluents();
  std::vector<std::size_t> out;
  std::set_union(fa.begin(), fa.end(), fb.begin(), fb.end(),
                 std::back_inserter(out));
  return out;
}

}  // namespace

bool entails(const Sentence& a, const Sentence& b, const Vocabulary& v) {
  a.validate(v);
  b.validate(v);
  // Only the mentioned fluents can change either truth value.
  const auto varying = union_fluents(a, b);
  bool ok = true;
  v.for_each_assignment(varying, v.first_state(), [&](const State& s) {
    if (ok && a.holds(s) && !b.holds(s)) ok = false;
  });
  return ok;
}

bool equivalent(const Sentence& a, const Sentence& b, const Vocabulary& v) {
  return entails(a, b, v) && entails(b, a, v);
}

namespace {

template <typename T>
int lower_impl(const Sentence& phi, std::span<const T> items) {
  if (items.empty()) throw DegenerateEffectError("lower probability of an empty state set");
  for (const auto& x : items)
    if (!phi.holds(x)) return 0;
  return 1;
}

template <typename T>
int upper_impl(const Sentence& phi, std::span<const T> items) {
  if (items.empty()) throw DegenerateEffectError("upper probability of an empty state set");
  for (const auto& x : items)
    if (phi.holds(x)) return 1;
  return 0;
}

}  // namespace

int lower_prob(const Sentence& phi, std::span<const State> states) {
  return lower_impl(phi, states);
}
int upper_prob(const Sentence& phi, std::span<const State> states) {
  return upper_impl(phi, states);
}
int lower_prob(const Sentence& phi, std::span<const Transition> transitions) {
  return lower_impl(phi, transitions);
}
int upper_prob(const Sentence& phi, std::span<const Transition> transitions) {
  return upper_impl(phi, transitions);
}

ProbInterval::ProbInterval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo <= hi))
    throw ValidationError(fmt::format("invalid probability interval [{}, {}]", lo, hi));
}

ProbInterval ProbInterval::clamped(double lo, double hi) {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (lo > hi) lo = hi;
  return {lo, hi};
}

StateDistribution::StateDistribution(const Vocabulary& v, std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("distribution has no states");
  double total = 0.0;
  std::set<State> seen;
  for (const auto& [state, p] : entries_) {
    if (!v.contains(state))
      throw ValidationError("distribution state outside the vocabulary");
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError(fmt::format("state probability {} outside [0,1]", p));
    if (!seen.insert(state).second)
      throw ValidationError("distribution lists state '" + v.describe(state) + "' twice");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance)
    throw ValidationError(fmt::format("distribution sums to {} instead of 1", total));
}

StateDistribution StateDistribution::point(const Vocabulary& v, State s) {
  return StateDistribution(v, {{std::move(s), 1.0}});
}

std::vector<StateDistribution::Entry> StateDistribution::support() const {
  std::vector<Entry> out;
  for (const auto& e : entries_)
    if (e.second > 0.0) out.push_back(e);
  return out;
}

StateDistribution StateDistribution::mix(const Vocabulary& v,
                                         const StateDistribution& a,
                                         const StateDistribution& b,
                                         double lambda) {
  std::vector<Entry> merged;
  auto add = [&](const State& s, double w) {
    for (auto& e : merged)
      if (e.first == s) {
        e.second += w;
        return;
      }
    merged.emplace_back(s, w);
  };
  for (const auto& [s, p] : a.entries()) add(s, lambda * p);
  for (const auto& [s, p] : b.entries()) add(s, (1.0 - lambda) * p);
  return StateDistribution(v, std::move(merged));
}

double prob_of(const Sentence& s, const StateDistribution& d) {
  double total = 0.0;
  for (const auto& [state, p] : d.entries())
    if (s.holds(state)) total += p;
  return total;
}

}  // namespace pact
