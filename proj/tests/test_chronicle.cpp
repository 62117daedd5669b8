#include <doctest.h>

#include <sstream>

#include "pact/chronicle.hpp"
#include "pact/generator.hpp"
#include "support.hpp"

using namespace pact;
using pact::test::tomato;

namespace {

Vocabulary small() {
  return Vocabulary({{"muddy", Domain::symbols({"T", "F"})}, {"fuel", Domain::range(0, 10)}});
}

Branch branch(std::string label, double p, EffectSpec e = {}) {
  return {std::move(label), SingleCondition{Sentence::truth()}, PointProb{p}, std::move(e)};
}

bool has_component(const std::string& label, const std::string& part) {
  std::stringstream in(label);
  std::string piece;
  while (std::getline(in, piece, '+'))
    if (piece == part) return true;
  return false;
}

}  // namespace

TEST_CASE("apply_effect on states") {
  const auto v = small();
  const State s({1, 10});
  CHECK(apply_effect(s, EffectSpec().set(1, Constraint::relative(-8)), v) ==
        std::vector<State>{State({1, 2})});
  CHECK(apply_effect(s, EffectSpec(), v) == std::vector<State>{s});
  const auto maybe = apply_effect(s, EffectSpec().set(0, Constraint::maybe_unchanged(Constraint::exact(0))), v);
  CHECK(maybe == std::vector<State>{State({0, 10}), State({1, 10})});
  CHECK_THROWS_AS(apply_effect(State({1, 3}), EffectSpec().set(1, Constraint::relative(-8)), v),
                  DomainOverflowError);
}

TEST_CASE("apply_effect on envelopes") {
  const auto v = small();
  const Envelope e(std::vector<std::vector<Value>>{{1}, {4, 9}});
  const Envelope out = apply_effect(e, EffectSpec().set(1, Constraint::relative_range(-5, -4)), v);
  CHECK(out.values(1) == std::vector<Value>{0, 4, 5});
  CHECK(out.values(0) == std::vector<Value>{1});
  CHECK(out.contains(State({1, 5})));
  CHECK_FALSE(out.contains(State({0, 5})));
}

TEST_CASE("two two-branch actions give four chronicles") {
  const auto v = small();
  const ActionDescription a{"a", 1,
                            {branch("x", 0.3, EffectSpec().set(1, Constraint::relative(1))),
                             branch("y", 0.7)},
                            ActionKind::Concrete};
  const ActionDescription b{"b", 2,
                            {branch("u", 0.4, EffectSpec().set(0, Constraint::exact(0))),
                             branch("w", 0.6)},
                            ActionKind::Concrete};
  const std::vector<const ActionDescription*> plan{&a, &b};
  const auto d0 = StateDistribution::point(v, State({1, 5}));
  const auto set = enumerate_chronicles(plan, v, d0);
  REQUIRE(set.chronicles.size() == 4);
  const double expected[] = {0.3 * 0.4, 0.3 * 0.6, 0.7 * 0.4, 0.7 * 0.6};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(set.chronicles[i].probability.lo() == doctest::Approx(expected[i]));
    CHECK(set.chronicles[i].probability.is_point());
    CHECK(set.chronicles[i].final_step().time == 3);
  }
  CHECK(set.total_probability() == doctest::Approx(1.0));
  CHECK(set.chronicles[0].final_step().state.state() == State({0, 6}));
  CHECK(set.chronicles[0].trace == std::vector<TraceEntry>{{"a", "x"}, {"b", "u"}});
}

TEST_CASE("a no-op plan keeps the initial distribution") {
  const auto v = small();
  const ActionDescription noop{"noop", 1, {branch("a", 1.0)}, ActionKind::Concrete};
  const std::vector<const ActionDescription*> plan{&noop};
  const StateDistribution d0(v, {{State({0, 1}), 0.25}, {State({1, 7}), 0.75}});
  const auto set = enumerate_chronicles(plan, v, d0);
  REQUIRE(set.chronicles.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(set.chronicles[i].final_step().state.state() == d0.entries()[i].first);
    CHECK(set.chronicles[i].probability.lo() == doctest::Approx(d0.entries()[i].second));
  }
}

TEST_CASE("a state no condition covers is reported") {
  const auto v = small();
  const ActionDescription partial{
      "partial", 1,
      {{"a", SingleCondition{test::sentence("muddy = T", v)}, PointProb{1.0}, EffectSpec()}},
      ActionKind::IntraI};
  const std::vector<const ActionDescription*> plan{&partial};
  CHECK_THROWS_AS(enumerate_chronicles(plan, v, StateDistribution::point(v, State({1, 0}))),
                  IncompletenessError);
  CHECK_THROWS_AS(enumerate_chronicles({}, v, StateDistribution::point(v, State({1, 0}))),
                  ValidationError);
}

TEST_CASE("concrete chronicle probabilities sum to one") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_vocabulary(rng, 3, 3);
    std::vector<ActionDescription> actions;
    for (int i = 0; i < 3; ++i) actions.push_back(random_concrete_action(rng, v, "a" + std::to_string(i)));
    std::vector<const ActionDescription*> plan;
    for (const auto& a : actions) plan.push_back(&a);
    const auto set = enumerate_chronicles(plan, v, random_distribution(rng, v, 3));
    CHECK(set.total_probability() == doctest::Approx(1.0));
  }
}

// Each concrete chronicle of a drive instance lies inside the abstract
// chronicle that follows the abstract branch grouping its concrete branch.
TEST_CASE("abstract chronicles cover the concrete ones") {
  const auto& d = tomato();
  const Network net = d.network();
  const auto& drive = net.summary("drive").front();
  const auto& home = net.action("drive-home");
  const std::vector<const ActionDescription*> abstract_plan{&drive, &home};
  const auto abstract = enumerate_chronicles(abstract_plan, d.vocabulary, d.initial);

  for (const char* road : {"mountain-road", "valley-road"}) {
    const std::vector<const ActionDescription*> plan{&net.action(road), &home};
    const auto concrete = enumerate_chronicles(plan, d.vocabulary, d.initial);
    CHECK(concrete.total_probability() == doctest::Approx(1.0));
    for (const auto& c : concrete.chronicles) {
      if (c.probability.hi() == 0.0) continue;
      int matches = 0;
      for (const auto& a : abstract.chronicles) {
        if (!(a.steps.front().state == c.steps.front().state)) continue;
        if (!has_component(a.trace[0].branch, c.trace[0].branch)) continue;
        if (a.trace[1].branch != c.trace[1].branch) continue;
        ++matches;
        CHECK(a.probability.contains(c.probability.lo()));
        for (std::size_t i = 0; i < c.steps.size(); ++i) {
          CHECK(a.steps[i].state.contains(c.steps[i].state));
          CHECK(a.steps[i].time == c.steps[i].time);
        }
      }
      CHECK(matches == 1);
    }
  }
}
