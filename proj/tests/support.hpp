#pragma once

#include <string>

#include "pact/domain.hpp"

namespace pact::test {

inline std::string data_path(const std::string& file) { return std::string(PACT_DATA_DIR) + "/" + file; }

inline const DomainFile& tomato() {
  static const DomainFile d = load_domain(data_path("tomato.domain"));
  return d;
}

inline Sentence sentence(const std::string& text, const Vocabulary& v) { return parse_sentence(text, v); }

}  // namespace pact::test

namespace pact::test {

/// Post-state of a deterministic effect, straight from the constraint fields.
inline State apply_exact(const State& s, const EffectSpec& e) {
  std::vector<Value> out = s.values();
  for (const auto& [f, c] : e.entries()) {
    if (c.core() == Constraint::Core::Absolute) out[f] = c.values().front();
    if (c.core() == Constraint::Core::Relative) out[f] = s[f] + c.delta_lo();
  }
  return State(std::move(out));
}

/// P(phi) after a concrete action, summed over (prestate, branch) pairs.
inline double brute_projection(const ActionDescription& a, const StateDistribution& d0,
                               const Sentence& phi) {
  double total = 0.0;
  for (const auto& [s, w] : d0.entries())
    for (const auto& b : a.branches) {
      if (!std::get<SingleCondition>(b.condition).sentence.holds(s)) continue;
      if (phi.holds(s, apply_exact(s, b.effect))) total += w * std::get<PointProb>(b.prob).p;
    }
  return total;
}

}  // namespace pact::test
