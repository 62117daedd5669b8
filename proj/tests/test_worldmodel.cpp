#include <doctest.h>

#include <random>

#include "pact/oracle.hpp"
#include "pact/worldmodel.hpp"
#include "support.hpp"

using namespace pact;
using pact::test::sentence;

namespace {

Vocabulary muddy_fuel() {
  return Vocabulary({{"muddy", Domain::symbols({"T", "F"})}, {"fuel", Domain::range(0, 10)}});
}

std::vector<State> subset(const std::vector<State>& all, unsigned mask) {
  std::vector<State> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask >> i & 1u) out.push_back(all[i]);
  return out;
}

}  // namespace

TEST_CASE("domains and vocabularies") {
  const auto v = muddy_fuel();
  CHECK(v.state_count() == 22);
  CHECK(v.fluent(0).domain.format(0) == "T");
  CHECK(v.fluent(0).domain.parse("F") == 1);
  CHECK(v.fluent(1).domain.parse("11") == std::nullopt);
  CHECK(v.require("fuel") == 1);
  CHECK_THROWS_AS(v.require("hours"), ValidationError);
  CHECK_THROWS_AS(Vocabulary({{"x", Domain::range(0, 1)}, {"x", Domain::range(0, 1)}}),
                  ValidationError);
  CHECK_THROWS_AS(Domain::range(3, 2), ValidationError);
}

TEST_CASE("models") {
  const Vocabulary one({{"muddy", Domain::symbols({"T", "F"})}});
  CHECK(models(Sentence::truth(), one).size() == 2);
  CHECK(models(sentence("muddy = T and muddy = F", one), one).empty());

  const Vocabulary fuel({{"fuel", Domain::range(0, 10)}});
  std::vector<State> expected;
  for (Value x = 0; x <= 10; ++x)
    if (x >= 9) expected.push_back(State({x}));
  CHECK(models(sentence("fuel >= 9", fuel), fuel) == expected);
}

TEST_CASE("entailment") {
  const auto v = muddy_fuel();
  CHECK(entails(sentence("fuel = 3", v), sentence("fuel >= 2", v), v));
  CHECK_FALSE(entails(Sentence::truth(), Sentence::falsity(), v));
  CHECK(entails(sentence("muddy = T or muddy = F", v), Sentence::truth(), v));
  CHECK(equivalent(sentence("not fuel < 4", v), sentence("fuel >= 4", v), v));
}

TEST_CASE("lower and upper probability of state sets") {
  const auto v = muddy_fuel();
  const Sentence low = sentence("fuel <= 2", v);
  const std::vector<State> both_low{State({0, 1}), State({1, 2})};
  const std::vector<State> mixed{State({0, 1}), State({0, 7})};
  const std::vector<State> high{State({0, 7}), State({1, 9})};
  CHECK(lower_prob(low, both_low) == 1);
  CHECK(lower_prob(low, mixed) == 0);
  CHECK(lower_prob(Sentence::truth(), high) == 1);
  CHECK(upper_prob(low, high) == 0);
  CHECK(upper_prob(Sentence::falsity(), mixed) == 0);
  CHECK(upper_prob(low, mixed) == 1);
  CHECK_THROWS_AS(lower_prob(low, std::span<const State>{}), DegenerateEffectError);
}

TEST_CASE("probability of a sentence under a distribution") {
  const auto v = muddy_fuel();
  const StateDistribution d(v, {{State({0, 1}), 0.5}, {State({1, 1}), 0.5}});
  CHECK(prob_of(Sentence::truth(), d) == doctest::Approx(1.0));
  CHECK(prob_of(Sentence::falsity(), d) == 0.0);
  CHECK(prob_of(sentence("muddy = T", v), d) == doctest::Approx(0.5));
  CHECK_THROWS_AS(StateDistribution(v, {{State({0, 1}), 0.5}}), ValidationError);
  CHECK_THROWS_AS(StateDistribution(v, {{State({0, 11}), 1.0}}), ValidationError);
}

TEST_CASE("probability intervals") {
  CHECK_THROWS_AS(ProbInterval(0.6, 0.4), ValidationError);
  CHECK_THROWS_AS(ProbInterval(-0.1, 0.4), ValidationError);
  CHECK(ProbInterval::clamped(-1e-12, 1.0 + 1e-12) == ProbInterval(0.0, 1.0));
}

// Bounds from a superset hold for every distribution on a subset, for every
// sentence over a small vocabulary.
TEST_CASE("set bounds contain every distribution on a subset") {
  const Vocabulary v({{"a", Domain::symbols({"T", "F"})}, {"b", Domain::range(0, 1)}});
  const auto states = v.states();
  const auto sentences = all_sentences(v);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  int checked = 0;
  for (const auto& phi : sentences) {
    for (unsigned set_mask = 1; set_mask < 16; ++set_mask) {
      const auto set = subset(states, set_mask);
      const int lo = lower_prob(phi, set);
      const int hi = upper_prob(phi, set);
      CHECK(lo <= hi);
      for (unsigned sub = set_mask; sub; sub = (sub - 1) & set_mask) {
        const auto members = subset(states, sub);
        std::vector<double> w;
        double total = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) total += w.emplace_back(weight(rng));
        std::vector<StateDistribution::Entry> entries;
        for (std::size_t i = 0; i < members.size(); ++i) entries.emplace_back(members[i], w[i] / total);
        const double p = prob_of(phi, StateDistribution(v, entries));
        CHECK(p >= lo - 1e-9);
        CHECK(p <= hi + 1e-9);
        ++checked;
      }
    }
  }
  CHECK(checked == 16 * 65);
}

TEST_CASE("entailment agrees with the lower probability of the models") {
  const Vocabulary v({{"a", Domain::symbols({"T", "F"})}, {"b", Domain::range(0, 1)}});
  const auto sentences = all_sentences(v);
  for (const auto& a : sentences) {
    const auto m = models(a, v);
    if (m.empty()) continue;
    for (const auto& b : sentences) CHECK(entails(a, b, v) == (lower_prob(b, m) == 1));
  }
}

TEST_CASE("probability is additive over disjoint sentences") {
  const Vocabulary v({{"a", Domain::symbols({"T", "F"})}, {"b", Domain::range(0, 1)}});
  const auto states = v.states();
  const StateDistribution d(v, {{states[0], 0.1}, {states[1], 0.2}, {states[2], 0.3}, {states[3], 0.4}});
  const auto sentences = all_sentences(v);
  for (std::size_t i = 0; i < sentences.size(); ++i)
    for (std::size_t j = 0; j < sentences.size(); ++j) {
      if (i & j) continue;  // index bits are the model sets
      CHECK(prob_of(sentences[i] || sentences[j], d) ==
            doctest::Approx(prob_of(sentences[i], d) + prob_of(sentences[j], d)));
    }
}

TEST_CASE("sentences over start and end terms") {
  const auto v = muddy_fuel();
  const Sentence used8 = sentence("fuel@end = fuel@start - 8", v);
  CHECK(used8.holds(State({0, 10}), State({0, 2})));
  CHECK_FALSE(used8.holds(State({0, 10}), State({0, 3})));
  CHECK_THROWS_AS(sentence("fuel = 11", v), ParseError);
  CHECK_THROWS_AS(Sentence::equals(1, 11).validate(v), ValidationError);
}
