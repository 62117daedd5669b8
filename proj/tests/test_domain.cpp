#include <doctest.h>

#include "pact/abstraction.hpp"
#include "pact/domain.hpp"
#include "pact/generator.hpp"
#include "support.hpp"

using namespace pact;
using pact::test::tomato;

namespace {

std::string parse_message(std::string_view text) {
  try {
    parse_domain(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the bundled tomato domain") {
  const auto& d = tomato();
  CHECK(d.vocabulary.size() == 6);
  CHECK(d.actions.size() == 3);
  CHECK(d.abstractions.size() == 2);
  CHECK(d.root == "deliver");
  for (const auto& a : d.actions) CHECK(validate_concrete(a, d.vocabulary).empty());
  double total = 0.0;
  for (const auto& [s, p] : d.initial.entries()) total += p;
  CHECK(total == doctest::Approx(1.0));

  // Declared abstractions are exactly the abstraction module's output.
  const Network net = d.network();
  const auto* drive = d.find_abstraction("drive");
  REQUIRE(drive);
  const std::vector<ActionDescription> roads{*d.find_action("mountain-road"),
                                             *d.find_action("valley-road")};
  CHECK(net.summary("drive").front() ==
        inter_abstract_I(roads, grouping_from_labels(roads, drive->groups), d.vocabulary, "drive"));
}

TEST_CASE("serialization round-trips") {
  const auto& d = tomato();
  const std::string text = serialize_domain(d);
  const auto again = parse_domain(text);
  CHECK(again == d);
  CHECK(serialize_domain(again) == text);

  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto net = random_network(rng, 1000);
    const auto copy = parse_domain(serialize_domain(net));
    CHECK(copy == net);
  }
  const auto eng = uniform_network(3, 2, 2, 0, true);
  CHECK(parse_domain(serialize_domain(eng)) == eng);
}

TEST_CASE("diagnostics") {
  CHECK(parse_message("").find("missing vocabulary") != std::string::npos);
  CHECK(parse_message("# only a comment\n").find("missing vocabulary") != std::string::npos);

  const std::string base = "fluent f : {T, F}\naction a duration 1\n";
  const auto high = parse_message(base + "  branch x when TRUE prob 1.3 effect none\nend\n");
  CHECK(high.find("3:") == 0);
  CHECK(high.find("[0,1]") != std::string::npos);

  CHECK_FALSE(parse_message("fluent f : {T, F}\nfluent f : 0..3\n").empty());
  CHECK_FALSE(parse_message("fluent and : {T, F}\n").empty());
  CHECK_FALSE(parse_message("fluent f : 0..3\naction a duration 1\n  branch x when g = 1 prob 1 effect none\nend\n").empty());
  CHECK_THROWS_AS(parse_domain(base + "  branch x when f = T prob 1 effect none\nend\n"),
                  ValidationError);
  CHECK_THROWS_AS(load_domain("/nonexistent/file.domain"), ParseError);
}

TEST_CASE("sentence syntax") {
  const auto& v = tomato().vocabulary;
  const auto s = parse_sentence("fuel@end = fuel@start - 8 and not (muddy = T | hours > 3)", v);
  CHECK(s.holds(State({1, 1, 1, 20, 0, 0}), State({1, 1, 1, 12, 2, 0})));
  CHECK_FALSE(s.holds(State({1, 1, 1, 20, 0, 0}), State({1, 1, 0, 12, 2, 0})));
  CHECK(parse_sentence(s.to_string(v), v) == s);
  CHECK_THROWS_AS(parse_sentence("fuel = ", v), ParseError);
  CHECK_THROWS_AS(parse_sentence("", v), ParseError);
  CHECK_THROWS_AS(parse_sentence("muddy = X", v), ParseError);
}

TEST_CASE("effect and probability formatting") {
  const auto& v = tomato().vocabulary;
  EffectSpec e;
  e.set(2, Constraint::maybe_unchanged(Constraint::exact(0)));
  e.set(3, Constraint::relative_range(-6, -4));
  CHECK(format_effect(e, v) == "muddy := T or unchanged, fuel += [-6, -4]");
  CHECK(format_effect(EffectSpec(), v) == "none");
  CHECK(format_prob(RangeProb{0.1, 0.3}) == "0.1..0.3");
  CHECK(format_prob(ProbList{{0.9, 0}}) == "[0.9; 0]");
}
