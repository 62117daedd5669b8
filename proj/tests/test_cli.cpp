#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "pact/cli.hpp"
#include "support.hpp"

using namespace pact;
using pact::test::data_path;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(RunConfig c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig project(std::string action, std::string query) {
  RunConfig c;
  c.command = "project";
  c.input = data_path("tomato.domain");
  c.action = std::move(action);
  c.query = std::move(query);
  return c;
}

}  // namespace

TEST_CASE("project") {
  const auto r = invoke(project("drive-home", "fuel@end = fuel@start - 8"));
  CHECK(r.code == kExitOk);
  CHECK(r.out.substr(0, r.out.find('\n')) == "0.700000");

  CHECK(invoke(project("drive-home", "TRUE")).out.substr(0, 9) == "1.000000\n");

  const auto drive = invoke(project("drive", "muddy = T"));
  CHECK(drive.code == kExitOk);
  CHECK(drive.out.front() == '[');
  CHECK(drive.out.find("branch b: ") != std::string::npos);

  auto json = project("drive", "muddy = T");
  json.format = "json";
  json.precision = 3;
  const auto j = nlohmann::json::parse(invoke(json).out);
  CHECK(j["lo"].get<double>() <= j["hi"].get<double>());
  CHECK(j["breakdown"].size() == 4);
}

TEST_CASE("abstract") {
  RunConfig c;
  c.command = "abstract";
  c.input = data_path("tomato.domain");
  c.action = "mountain-road";
  c.method = "intra2";
  c.grouping = "a,c;b,d";
  const auto r = invoke(c);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("kind intra2") != std::string::npos);
  CHECK(r.out.find("branch a+c") != std::string::npos);
  CHECK(r.out.find("branch b+d") != std::string::npos);

  c.action = "drive";
  c.method.clear();
  c.grouping.clear();
  const auto drive = invoke(c);
  CHECK(drive.code == kExitOk);
  CHECK(drive.out.find("prob [0.1; 0]") != std::string::npos);

  c.action = "mountain-road,valley-road";
  c.method = "inter2";
  const auto aligned = invoke(c);
  CHECK(aligned.code == kExitOk);
  CHECK(aligned.out.find("conj") != std::string::npos);

  c.grouping = "a,zz";
  CHECK(invoke(c).code == kExitValidation);
}

TEST_CASE("plan") {
  RunConfig c;
  c.command = "plan";
  c.input = data_path("tomato.domain");
  const auto r = invoke(c);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("optimal:\n  mountain-road drive-home") == 0);
  CHECK(r.out.find("plans examined: 2 of 2") != std::string::npos);
  c.format = "json";
  const auto j = nlohmann::json::parse(invoke(c).out);
  CHECK(j["plans_examined"] == 2);
}

TEST_CASE("verify") {
  RunConfig c;
  c.command = "verify";
  c.cases = 20;
  c.seed = 3;
  const auto r = invoke(c);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("cases run: 80") != std::string::npos);
  CHECK(r.out.find("verdict: sound") != std::string::npos);
  CHECK(invoke(c).out == r.out);

  c.methods = "inter1";
  CHECK(invoke(c).out.find("cases run: 20") != std::string::npos);
  c.methods = "bogus";
  CHECK(invoke(c).code == kExitUsage);

  RunConfig planner;
  planner.command = "verify";
  planner.input = data_path("tomato.domain");
  CHECK(invoke(planner).code == kExitOk);
}

TEST_CASE("gen-network output parses back") {
  RunConfig c;
  c.command = "gen-network";
  c.n = 3;
  c.p = 2;
  c.k = 2;
  c.engineered = true;
  const auto r = invoke(c);
  CHECK(r.code == kExitOk);
  const auto d = parse_domain(r.out);
  CHECK(d.uniform == UniformShape{3, 2, 2});
  CHECK(invoke(c).out == r.out);
}

TEST_CASE("exit codes") {
  CHECK(invoke(project("nowhere", "TRUE")).code == kExitUsage);
  CHECK(invoke(project("drive-home", "fuel = ")).code == kExitUsage);
  auto missing = project("drive-home", "TRUE");
  missing.input = "/nonexistent.domain";
  CHECK(invoke(missing).code == kExitUsage);
  auto precision = project("drive-home", "TRUE");
  precision.precision = 13;
  CHECK(invoke(precision).code == kExitUsage);
  RunConfig unknown;
  unknown.command = "dance";
  CHECK(invoke(unknown).code == kExitUsage);
  // A task stands for two actions and cannot be projected.
  CHECK(invoke(project("deliver", "TRUE")).code == kExitValidation);
}

TEST_CASE("output is deterministic") {
  const auto a = invoke(project("drive", "hours >= 3"));
  const auto b = invoke(project("drive", "hours >= 3"));
  CHECK(a.out == b.out);
}
