#include <CLI11.hpp>

#include <iostream>

#include "pact/cli.hpp"

int main(int argc, char** argv) {
  pact::RunConfig config;
  CLI::App app{"Probabilistic action abstraction and planning"};
  app.require_subcommand(1);

  auto output_flags = [&](CLI::App* sub) {
    sub->add_option("--format", config.format, "human or json")
        ->check(CLI::IsMember({"human", "json"}));
    sub->add_option("--precision", config.precision, "decimal places")->check(CLI::Range(1, 12));
  };

  auto* project = app.add_subcommand("project", "Probability of a query after an action");
  project->add_option("domain", config.input, "domain file")->required();
  project->add_option("--action", config.action)->required();
  project->add_option("--query", config.query)->required();
  project->add_flag("--trace", config.trace, "list the transitions and whether the query holds");
  output_flags(project);

  auto* abstract = app.add_subcommand("abstract", "Build an abstract action");
  abstract->add_option("domain", config.input, "domain file")->required();
  abstract->add_option("--action", config.action,
                       "declared abstraction, or comma-separated instance actions")
      ->required();
  abstract->add_option("--method", config.method, "intra1, intra2, inter1 or inter2");
  abstract->add_option("--grouping", config.grouping, "e.g. \"a,c;b,d\"");
  output_flags(abstract);

  auto* plan = app.add_subcommand("plan", "Find the plans with maximal expected utility");
  plan->add_option("domain", config.input, "domain file")->required();
  plan->add_option("--root", config.root);
  output_flags(plan);

  auto* verify = app.add_subcommand(
      "verify", "Check abstractions on random cases, or the planner on a domain");
  verify->add_option("domain", config.input, "domain file (planner check)");
  verify->add_option("--methods", config.methods, "comma-separated methods or all");
  verify->add_option("--cases", config.cases, "cases per method");
  verify->add_option("--seed", config.seed);
  verify->add_option("--root", config.root);
  verify->add_flag("--timing", config.timing, "report elapsed time");
  output_flags(verify);

  auto* gen = app.add_subcommand("gen-network", "Write a uniform synthetic network");
  gen->add_option("--n", config.n, "instances per abstract action");
  gen->add_option("--p", config.p, "steps per decomposition");
  gen->add_option("--k", config.k, "abstraction levels");
  gen->add_option("--seed", config.seed);
  gen->add_flag("--engineered", config.engineered, "maximal-pruning utilities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pact::kExitUsage;
  }
  config.command = app.get_subcommands().front()->get_name();
  return pact::run(config, std::cout, std::cerr);
}
