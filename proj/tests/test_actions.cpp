#include <doctest.h>

#include "pact/actions.hpp"
#include "support.hpp"

using namespace pact;
using pact::test::sentence;
using pact::test::tomato;

namespace {

Vocabulary small() {
  return Vocabulary({{"muddy", Domain::symbols({"T", "F"})}, {"fuel", Domain::range(0, 10)}});
}

Branch branch(std::string label, Sentence c, double p, EffectSpec e = {}) {
  return {std::move(label), SingleCondition{std::move(c)}, PointProb{p}, std::move(e)};
}

bool mentions(const std::vector<std::string>& report, const std::string& text) {
  for (const auto& line : report)
    if (line.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("constraint outcomes") {
  const Domain fuel = Domain::range(0, 10);
  CHECK(Constraint::relative(-8).outcomes(10, fuel) == std::vector<Value>{2});
  CHECK(Constraint::relative(-8).outcomes(5, fuel).empty());
  CHECK(Constraint::exact(3).outcomes(7, fuel) == std::vector<Value>{3});
  CHECK(Constraint::maybe_unchanged(Constraint::exact(0)).outcomes(1, Domain::range(0, 1)) ==
        std::vector<Value>{0, 1});
  CHECK(Constraint::relative_range(-8, -5).outcomes(10, fuel) == std::vector<Value>{2, 3, 4, 5});
  CHECK(Constraint::anything().outcomes(4, Domain::range(0, 2)) == std::vector<Value>{0, 1, 2});
  CHECK(Constraint::unchanged().outcomes(4, fuel) == std::vector<Value>{4});
}

TEST_CASE("constraint join is an upper bound") {
  const Domain fuel = Domain::range(0, 10);
  const Constraint a = Constraint::relative(-8);
  const Constraint b = Constraint::relative(-5);
  const Constraint j = a.join(b);
  CHECK(j == Constraint::relative_range(-8, -5));
  CHECK(a.entails(j, fuel));
  CHECK(b.entails(j, fuel));
  CHECK_FALSE(j.entails(a, fuel));

  const Constraint set_t = Constraint::exact(0);
  const Constraint keep = set_t.join(Constraint::unchanged());
  CHECK(keep == Constraint::maybe_unchanged(Constraint::exact(0)));
  CHECK(a.join(a) == a);
  CHECK(a.join(Constraint::exact(4)) == Constraint::anything());
}

TEST_CASE("validate_concrete") {
  const auto& d = tomato();
  const auto* mountain = d.find_action("mountain-road");
  REQUIRE(mountain);
  CHECK(validate_concrete(*mountain, d.vocabulary).empty());

  const auto v = small();
  const ActionDescription one{"one", 1, {branch("a", Sentence::truth(), 1.0)}, ActionKind::Concrete};
  CHECK(validate_concrete(one, v).empty());

  const ActionDescription over{"over", 1,
                               {branch("a", Sentence::truth(), 0.6),
                                branch("b", Sentence::truth(), 0.6,
                                       EffectSpec().set(1, Constraint::exact(1)))},
                               ActionKind::Concrete};
  const auto report = validate_concrete(over, v);
  CHECK(mentions(report, "sum to 1.2"));

  const ActionDescription gap{"gap", 1, {branch("a", sentence("muddy = T", v), 1.0)},
                              ActionKind::Concrete};
  CHECK_FALSE(validate_concrete(gap, v).empty());

  const ActionDescription overlap{"overlap", 1,
                                  {branch("a", sentence("fuel > 2", v), 1.0),
                                   branch("b", sentence("fuel < 5", v), 1.0)},
                                  ActionKind::Concrete};
  CHECK_FALSE(validate_concrete(overlap, v).empty());

  const ActionDescription set_valued{
      "set", 1, {branch("a", Sentence::truth(), 1.0, EffectSpec().set(1, Constraint::anything()))},
      ActionKind::Concrete};
  CHECK(mentions(validate_concrete(set_valued, v), "non-deterministic"));
  CHECK_THROWS_AS(validate_action(set_valued, v), ValidationError);
}

TEST_CASE("merge_duplicate_effects") {
  const auto v = small();
  const EffectSpec e = EffectSpec().set(1, Constraint::relative(1));
  const Sentence c = sentence("fuel < 5", v);
  const Sentence not_c = sentence("fuel >= 5", v);

  const ActionDescription dup{"dup", 1,
                              {branch("x", c, 0.3, e), branch("y", c, 0.2, e),
                               branch("z", c, 0.5), branch("w", not_c, 1.0)},
                              ActionKind::Concrete};
  const auto merged = merge_duplicate_effects(dup, v);
  REQUIRE(merged.branches.size() == 3);
  CHECK(std::get<PointProb>(merged.branches[0].prob).p == doctest::Approx(0.5));
  CHECK(merged.branches[0].effect == e);

  const ActionDescription unique{"u", 1, {branch("x", c, 1.0, e), branch("w", not_c, 1.0)},
                                 ActionKind::Concrete};
  CHECK(merge_duplicate_effects(unique, v) == unique);

  const ActionDescription different{"d", 1, {branch("x", c, 1.0, e), branch("w", not_c, 1.0, e)},
                                    ActionKind::Concrete};
  CHECK(merge_duplicate_effects(different, v) == different);
}

TEST_CASE("pad_branches") {
  const ActionDescription one{"one", 1, {branch("a", Sentence::truth(), 1.0)}, ActionKind::Concrete};
  const auto padded = pad_branches(one, 3);
  REQUIRE(padded.branches.size() == 3);
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(std::get<SingleCondition>(padded.branches[i].condition).sentence.is_false());
    CHECK(std::get<PointProb>(padded.branches[i].prob).p == 0.0);
  }
  CHECK(pad_branches(one, 1) == one);
  CHECK_THROWS_AS(pad_branches(padded, 2), ValidationError);
}

TEST_CASE("effect validation") {
  const auto v = small();
  CHECK_THROWS_AS(EffectSpec().set(1, Constraint::exact(11)).validate(v), ValidationError);
  CHECK_THROWS_AS(EffectSpec().set(5, Constraint::exact(1)).validate(v), ValidationError);
  CHECK_NOTHROW(EffectSpec().set(1, Constraint::relative(-3)).validate(v));
}
