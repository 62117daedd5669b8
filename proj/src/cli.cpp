#include "pact/cli.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <json.hpp>
#include <ostream>
#include <sstream>

#include "pact/abstraction.hpp"
#include "pact/domain.hpp"
#include "pact/generator.hpp"
#include "pact/oracle.hpp"
#include "pact/planner.hpp"
#include "pact/projection.hpp"

namespace pact {

namespace {

using json = nlohmann::json;

/// Bad flags or missing arguments.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    const auto first = part.find_first_not_of(" \t");
    const auto last = part.find_last_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(part.substr(first, last - first + 1));
  }
  return out;
}

class Printer {
 public:
  explicit Printer(int precision) : precision_(precision) {}

  std::string number(double x) const {
    // Avoid printing -0.000000.
    std::string s = fmt::format("{:.{}f}", x, precision_);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
  }
  std::string interval(double lo, double hi) const {
    const auto a = number(lo), b = number(hi);
    if (a == b) return a;
    return "[" + a + ", " + b + "]";
  }
  /// Rounded to the printed precision so json and human output agree.
  double rounded(double x) const { return std::stod(number(x)); }

 private:
  int precision_;
};

DomainFile load(const RunConfig& c) {
  if (c.input.empty()) throw UsageError(c.command + " needs a domain file");
  return load_domain(c.input);
}

int project_command(const RunConfig& c, std::ostream& out) {
  const DomainFile d = load(c);
  if (c.action.empty()) throw UsageError("project needs --action");
  if (c.query.empty()) throw UsageError("project needs --query");
  const Network net = d.network();
  if (!net.has_node(c.action)) throw UsageError("unknown action '" + c.action + "'");
  const auto& summary = net.summary(c.action);
  if (summary.size() != 1)
    throw ValidationError("'" + c.action + "' stands for " + std::to_string(summary.size()) +
                          " actions; project needs a single action");
  const ActionDescription& a = summary.front();
  const Sentence phi = parse_sentence(c.query, d.vocabulary);
  const PreparedProjection prepared(a, d.vocabulary, d.initial);
  const ProjectionResult r = prepared.evaluate(phi);
  const Printer pr(c.precision);

  if (c.format == "json") {
    json j;
    j["action"] = a.name;
    j["kind"] = kind_name(a.kind);
    j["query"] = phi.to_string(d.vocabulary);
    j["lo"] = pr.rounded(r.interval.lo());
    j["hi"] = pr.rounded(r.interval.hi());
    j["breakdown"] = json::array();
    for (const auto& b : r.breakdown)
      j["breakdown"].push_back(
          {{"label", b.label}, {"lo", pr.rounded(b.interval.lo())}, {"hi", pr.rounded(b.interval.hi())}});
    if (c.trace) {
      j["transitions"] = json::array();
      for (const auto& t : prepared.transitions())
        j["transitions"].push_back({{"start", d.vocabulary.describe(t.start)},
                                    {"end", d.vocabulary.describe(t.end)},
                                    {"holds", phi.holds(t)}});
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << pr.interval(r.interval.lo(), r.interval.hi()) << "\n";
  for (const auto& b : r.breakdown)
    out << "  branch " << b.label << ": " << pr.interval(b.interval.lo(), b.interval.hi()) << "\n";
  if (c.trace) {
    out << "transitions:\n";
    for (const auto& t : prepared.transitions())
      out << "  " << (phi.holds(t) ? "holds " : "fails ") << d.vocabulary.describe(t.start)
          << " -> " << d.vocabulary.describe(t.end) << "\n";
  }
  return kExitOk;
}

int abstract_command(const RunConfig& c, std::ostream& out) {
  const DomainFile d = load(c);
  if (c.action.empty()) throw UsageError("abstract needs --action");
  const Network net = d.network();

  std::vector<std::string> names = split(c.action, ',');
  std::optional<Method> method;
  std::vector<std::vector<std::string>> groups;
  std::string name;
  if (names.size() == 1 && net.is_choice(names.front())) {
    const ChoiceNode& node = net.choice(names.front());
    name = node.name;
    names = node.instances;
    method = node.method;
    groups = node.groups;
  }
  if (!c.method.empty()) {
    method = parse_method(c.method);
    if (!method) throw UsageError("unknown method '" + c.method + "'");
  }
  if (!method) throw UsageError("abstract needs --method");
  if (!c.grouping.empty()) {
    groups.clear();
    for (const auto& g : split(c.grouping, ';')) groups.push_back(split(g, ','));
  }

  std::vector<ActionDescription> instances;
  for (const auto& n : names) {
    if (!net.has_node(n)) throw UsageError("unknown action '" + n + "'");
    const auto& summary = net.summary(n);
    if (summary.size() != 1)
      throw ValidationError("'" + n + "' stands for " + std::to_string(summary.size()) +
                            " actions; abstract needs single actions");
    instances.push_back(summary.front());
  }
  if (name.empty()) name = is_inter(*method) ? fmt::format("{}", fmt::join(names, "+")) : "";
  GroupingPlan g;
  if (!groups.empty()) g = grouping_from_labels(instances, groups);
  else if (is_inter(*method)) g = aligned_grouping(instances);
  else if (instances.size() == 1) g = singleton_grouping(instances.front());
  const ActionDescription result = abstract_actions(*method, instances, g, d.vocabulary, name);

  if (c.format == "json") {
    json j;
    j["name"] = result.name;
    j["kind"] = kind_name(result.kind);
    j["method"] = method_name(*method);
    j["duration"] = result.duration;
    j["branches"] = json::array();
    for (const auto& b : result.branches)
      j["branches"].push_back({{"label", b.label},
                               {"condition", format_condition(b.condition, d.vocabulary)},
                               {"prob", format_prob(b.prob)},
                               {"effect", format_effect(b.effect, d.vocabulary)}});
    j["text"] = format_action(result, d.vocabulary);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << format_action(result, d.vocabulary);
  return kExitOk;
}

int plan_command(const RunConfig& c, std::ostream& out) {
  const DomainFile d = load(c);
  const Network net = d.network();
  const std::string root = c.root.empty() ? net.root() : c.root;
  if (root.empty()) throw UsageError("no root node; declare one or pass --root");
  if (!net.has_node(root)) throw UsageError("unknown root '" + root + "'");
  const SearchResult r = search(net, root);
  const Printer pr(c.precision);
  const double fraction = r.stats.total_concrete_plans
                              ? static_cast<double>(r.stats.plans_examined) /
                                    static_cast<double>(r.stats.total_concrete_plans)
                              : 0.0;

  if (c.format == "json") {
    json j;
    auto plan_json = [&](const CandidatePlan& p) {
      return json{{"steps", p.steps},
                  {"eu_lo", pr.rounded(p.eu.lo)},
                  {"eu_hi", pr.rounded(p.eu.hi)},
                  {"concrete", p.concrete},
                  {"depth", p.depth}};
    };
    j["root"] = root;
    j["optimal"] = json::array();
    for (const auto& p : r.optimal) j["optimal"].push_back(plan_json(p));
    j["survivors"] = json::array();
    for (const auto& p : r.survivors) j["survivors"].push_back(plan_json(p));
    j["plans_examined"] = r.stats.plans_examined;
    j["concrete_examined"] = r.stats.concrete_examined;
    j["total_concrete_plans"] = r.stats.total_concrete_plans;
    j["abstract_pruned"] = r.stats.abstract_pruned;
    json pruned = json::object();
    for (const auto& [depth, count] : r.stats.pruned_per_depth) pruned[std::to_string(depth)] = count;
    j["pruned_per_depth"] = pruned;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "optimal:\n";
  for (const auto& p : r.optimal)
    out << "  " << fmt::format("{}", fmt::join(p.steps, " ")) << "  EU "
        << pr.interval(p.eu.lo, p.eu.hi) << "\n";
  out << "ranked:\n";
  int rank = 1;
  for (const auto& p : r.survivors)
    out << "  " << rank++ << ". " << fmt::format("{}", fmt::join(p.steps, " ")) << "  EU "
        << pr.interval(p.eu.lo, p.eu.hi) << (p.concrete ? "" : "  (abstract)") << "\n";
  out << "plans examined: " << r.stats.plans_examined << " of " << r.stats.total_concrete_plans
      << " concrete (" << pr.number(100.0 * fraction) << "%)\n";
  out << "concrete plans evaluated: " << r.stats.concrete_examined << "\n";
  out << "abstract plans pruned: " << r.stats.abstract_pruned << "\n";
  out << "pruned by depth:";
  if (r.stats.pruned_per_depth.empty()) out << " none";
  for (const auto& [depth, count] : r.stats.pruned_per_depth) out << " " << depth << ":" << count;
  out << "\n";
  return kExitOk;
}

std::vector<Method> parse_methods(const std::string& text) {
  if (text == "all") return {Method::IntraI, Method::IntraII, Method::InterI, Method::InterII};
  std::vector<Method> out;
  for (const auto& name : split(text, ',')) {
    const auto m = parse_method(name);
    if (!m) throw UsageError("unknown method '" + name + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw UsageError("no methods given");
  return out;
}

int verify_command(const RunConfig& c, std::ostream& out) {
  VerificationReport report;
  std::string subject;
  if (!c.input.empty()) {
    const DomainFile d = load(c);
    const Network net = d.network();
    const std::string root = c.root.empty() ? net.root() : c.root;
    if (root.empty()) throw UsageError("no root node; declare one or pass --root");
    report = check_planner(net, root);
    subject = "planner on " + root;
  } else {
    if (c.cases < 1) throw UsageError("--cases must be positive");
    const auto methods = parse_methods(c.methods);
    report = verify_methods(methods, c.cases, c.seed);
    std::vector<std::string> names;
    for (Method m : methods) names.push_back(method_name(m));
    subject = fmt::format("methods {} seed {}", fmt::join(names, ","), c.seed);
  }
  const Printer pr(c.precision);

  if (c.format == "json") {
    json j;
    j["subject"] = subject;
    j["cases_run"] = report.cases_run;
    j["sound"] = report.sound();
    j["failures"] = json::array();
    for (const auto& f : report.failures)
      j["failures"].push_back({{"case", f.case_id},
                               {"seed", f.seed},
                               {"method", f.method},
                               {"description", f.description},
                               {"concrete_value", pr.rounded(f.concrete_value)},
                               {"lo", pr.rounded(f.lo)},
                               {"hi", pr.rounded(f.hi)}});
    if (c.timing) j["elapsed_seconds"] = report.elapsed_seconds;
    out << j.dump(2) << "\n";
  } else {
    out << "verified: " << subject << "\n";
    out << "cases run: " << report.cases_run << "\n";
    out << "failures: " << report.failures.size() << "\n";
    for (const auto& f : report.failures)
      out << "  case " << f.case_id << " seed " << f.seed << " " << f.method << ": "
          << f.description << " value " << pr.number(f.concrete_value) << " interval "
          << "[" << pr.number(f.lo) << ", " << pr.number(f.hi) << "]\n";
    if (c.timing) out << "elapsed: " << fmt::format("{:.3f}", report.elapsed_seconds) << " s\n";
    out << "verdict: " << (report.sound() ? "sound" : "UNSOUND") << "\n";
  }
  return report.sound() ? kExitOk : kExitVerification;
}

int gen_network_command(const RunConfig& c, std::ostream& out) {
  out << serialize_domain(uniform_network(c.n, c.p, c.k, c.seed, c.engineered));
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.precision < 1 || config.precision > 12)
      throw UsageError("--precision must be between 1 and 12");
    if (config.format != "human" && config.format != "json")
      throw UsageError("--format must be human or json");
    if (config.command == "project") return project_command(config, out);
    if (config.command == "abstract") return abstract_command(config, out);
    if (config.command == "plan") return plan_command(config, out);
    if (config.command == "verify") return verify_command(config, out);
    if (config.command == "gen-network") return gen_network_command(config, out);
    throw UsageError("unknown command '" + config.command + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace pact
