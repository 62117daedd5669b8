#include <doctest.h>

#include <algorithm>
#include <set>

#include "pact/chronicle.hpp"
#include "pact/generator.hpp"
#include "pact/oracle.hpp"
#include "pact/planner.hpp"
#include "support.hpp"

using namespace pact;
using pact::test::tomato;

namespace {

CandidatePlan evaluated(double lo, double hi) {
  CandidatePlan p;
  p.eu = {lo, hi};
  p.evaluated = true;
  return p;
}

/// Every concrete plan obtainable by choosing instances inside `steps`.
std::vector<std::vector<std::string>> instantiations(const Network& net,
                                                     const std::vector<std::string>& steps) {
  std::vector<std::vector<std::string>> out{{}};
  for (const auto& s : steps) {
    std::vector<std::vector<std::string>> next;
    for (const auto& tail : net.concrete_plans(s, 100000))
      for (const auto& head : out) {
        auto joined = head;
        joined.insert(joined.end(), tail.begin(), tail.end());
        next.push_back(std::move(joined));
      }
    out = std::move(next);
  }
  return out;
}

EuInterval eu_of(const Network& net, const std::vector<std::string>& steps) {
  const auto actions = net.plan_actions(steps);
  return expected_utility(actions, net.vocabulary(), net.initial(), net.utility());
}

}  // namespace

TEST_CASE("utility functions") {
  UtilityFunction u;
  u.set_component(0, {{0.0, 0.0}, {10.0, 10.0}});
  u.set_elapsed({{0.0, 0.0}, {4.0, -2.0}});
  CHECK(u.evaluate(State({5}), 0) == doctest::Approx(5.0));
  CHECK(u.evaluate(State({5}), 2) == doctest::Approx(4.0));
  CHECK(u.evaluate(State({5}), 9) == doctest::Approx(3.0));
  const Envelope e(std::vector<std::vector<Value>>{{2, 7}});
  CHECK(u.range(e, 0) == std::pair<double, double>{2.0, 7.0});
  UtilityFunction bad;
  bad.set_component(0, {{3.0, 0.0}, {3.0, 1.0}});
  CHECK_THROWS_AS(bad.validate(Vocabulary({{"x", Domain::range(0, 10)}})), ValidationError);
}

TEST_CASE("expected utility of a concrete no-op plan") {
  const Vocabulary v({{"x", Domain::range(0, 10)}});
  const ActionDescription noop{"noop", 1, {{"a", SingleCondition{}, PointProb{1.0}, EffectSpec()}},
                               ActionKind::Concrete};
  UtilityFunction u;
  u.set_component(0, {{0.0, 0.0}, {10.0, 10.0}});
  const std::vector<const ActionDescription*> plan{&noop};
  const auto eu = expected_utility(plan, v, StateDistribution::point(v, State({5})), u);
  CHECK(eu.lo == doctest::Approx(5.0));
  CHECK(eu.hi == doctest::Approx(5.0));
}

TEST_CASE("concrete expected utility is the chronicle sum") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_network(rng, 100);
    const Network net = d.network();
    for (const auto& steps : net.concrete_plans(net.root(), 100)) {
      const auto actions = net.plan_actions(steps);
      double sum = 0.0;
      for (const auto& c : enumerate_chronicles(actions, d.vocabulary, d.initial).chronicles)
        sum += c.probability.lo() * d.utility.evaluate(c.final_step().state.state(), c.final_step().time);
      const auto eu = expected_utility(actions, d.vocabulary, d.initial, d.utility);
      CHECK(eu.lo == doctest::Approx(sum));
      CHECK(eu.hi == eu.lo);
      CHECK(eu.lo == doctest::Approx(brute_force_expected_utility(actions, d.vocabulary, d.initial, d.utility)));
    }
  }
}

TEST_CASE("abstract expected utility contains every instantiation") {
  Rng rng(22);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = random_network(rng, 200);
    const Network net = d.network();
    const auto steps = net.expand(net.root());
    const auto bounds = eu_of(net, steps);
    for (const auto& plan : instantiations(net, steps)) {
      const auto actions = net.plan_actions(plan);
      const double exact = brute_force_expected_utility(actions, d.vocabulary, d.initial, d.utility);
      CHECK(exact >= bounds.lo - 1e-9);
      CHECK(exact <= bounds.hi + 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 40);
  const Network t = tomato().network();
  const auto drive = eu_of(t, {"drive", "drive-home"});
  for (const char* road : {"mountain-road", "valley-road"}) {
    const auto exact = eu_of(t, {road, "drive-home"});
    CHECK(exact.lo >= drive.lo - 1e-9);
    CHECK(exact.lo <= drive.hi + 1e-9);
  }
}

TEST_CASE("dominance") {
  CHECK(dominates(evaluated(3, 4), evaluated(1, 2)));
  CHECK_FALSE(dominates(evaluated(1, 2), evaluated(3, 4)));
  CHECK_FALSE(dominates(evaluated(1, 3), evaluated(2, 4)));
  CHECK_FALSE(dominates(evaluated(2, 4), evaluated(1, 3)));
  CHECK_FALSE(dominates(evaluated(2, 2), evaluated(2, 2)));
  CHECK_FALSE(dominates(evaluated(2, 2), evaluated(2 - 1e-12, 2 - 1e-12)));
}

TEST_CASE("refinement") {
  const Network net = tomato().network();
  CandidatePlan plan;
  plan.steps = {"drive", "drive-home"};
  const auto children = refine(plan, net);
  REQUIRE(children.size() == 2);
  CHECK(children[0].steps == std::vector<std::string>{"mountain-road", "drive-home"});
  CHECK(children[1].steps == std::vector<std::string>{"valley-road", "drive-home"});
  CHECK(children[0].concrete);
  CHECK(children[0].depth == 1);
  CHECK_THROWS_AS(refine(children[0], net), ValidationError);

  const auto d = uniform_network(3, 2, 2, 1, false);
  const Network u = d.network();
  CandidatePlan top;
  top.steps = u.expand(u.root());
  const auto kids = refine(top, u);
  CHECK(kids.size() == 3);
  for (const auto& k : kids) CHECK(k.steps.size() == 3);  // one task expanded into two choices
}

TEST_CASE("search on the tomato network") {
  const Network net = tomato().network();
  const auto r = search(net, net.root());
  REQUIRE(r.optimal.size() == 1);
  CHECK(r.stats.total_concrete_plans == 2);
  CHECK(r.stats.plans_examined == 2);
  CHECK(check_planner(net, net.root()).sound());
  const auto home = search(net, "drive-home");
  CHECK(home.stats.plans_examined == 1);
  CHECK(home.optimal.size() == 1);
}

TEST_CASE("maximal pruning bound") {
  CHECK(maximal_pruning_bound(2, 1, 2) == 4);
  CHECK(maximal_pruning_bound(5, 1, 1) == 5);
  CHECK(maximal_pruning_bound(3, 2, 2) == 18);
  CHECK(exhaustive_plan_count(3, 2, 2) == 729);
  CHECK(exhaustive_plan_count(2, 2, 3) == 16384);
  CHECK(exhaustive_plan_count(10, 10, 10) == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(maximal_pruning_bound(0, 1, 1), ValidationError);
}

TEST_CASE("engineered networks prune maximally") {
  for (const auto& [n, p, k] : {std::tuple{2, 1, 2}, {3, 2, 2}, {2, 2, 3}, {3, 1, 3}, {2, 3, 1}}) {
    const Network net = uniform_network(n, p, k, 0, true).network();
    const auto r = search(net, net.root());
    CHECK(r.stats.plans_examined == maximal_pruning_bound(n, p, k));
    CHECK(r.stats.total_concrete_plans == exhaustive_plan_count(n, p, k));
    REQUIRE(r.optimal.size() == 1);
    // Instance 0 everywhere is best.
    for (const auto& s : r.optimal.front().steps) CHECK(s.substr(s.size() - 2) == "_0");
  }
}

TEST_CASE("search matches exhaustive enumeration on random networks") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = random_network(rng, 1000).network();
    const auto report = check_planner(net, net.root());
    CHECK(report.sound());
    for (const auto& f : report.failures) MESSAGE(f.description);
  }
  const Network shaped = uniform_network(3, 2, 2, 99, false).network();
  CHECK(check_planner(shaped, shaped.root()).sound());
}

TEST_CASE("refinement narrows expected utility intervals") {
  Rng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = random_network(rng, 1000).network();
    const auto r = search(net, net.root(), {true});
    for (const auto& rec : r.refinements)
      for (const auto& c : rec.children_eu) {
        CHECK(c.lo >= rec.parent_eu.lo - 1e-9);
        CHECK(c.hi <= rec.parent_eu.hi + 1e-9);
      }
  }
}

TEST_CASE("no instantiation of a refined plan beats the reported optimum") {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_network(rng, 300);
    const Network net = d.network();
    const auto r = search(net, net.root(), {true});
    const double best = r.optimal.front().eu.lo;
    for (const auto& rec : r.refinements)
      for (const auto& plan : instantiations(net, rec.parent)) {
        const auto actions = net.plan_actions(plan);
        CHECK(brute_force_expected_utility(actions, d.vocabulary, d.initial, d.utility) <=
              best + 1e-9);
      }
  }
}

TEST_CASE("network validation") {
  const auto& d = tomato();
  CHECK_THROWS_AS(Network(d.vocabulary, d.initial, d.utility, d.actions, d.abstractions,
                          {TaskNode{"loop", {"loop"}}}, "loop"),
                  ValidationError);
  CHECK_THROWS_AS(Network(d.vocabulary, d.initial, d.utility, d.actions,
                          {ChoiceNode{"c", {"missing"}, Method::InterII, {}}}, {}, "c"),
                  ValidationError);
}
