#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pact/abstraction.hpp"
#include "pact/actions.hpp"
#include "pact/generator.hpp"
#include "pact/planner.hpp"
#include "pact/worldmodel.hpp"

namespace pact {

/// One sentence per set of states: FALSE, or the disjunction of the
/// conjunctions describing each member state. Throws BoundError above 16
/// states.
std::vector<Sentence> all_sentences(const Vocabulary& v);

/// Inputs to one abstraction method plus the concrete actions the result
/// must cover. For nested cases `instances` may already be abstract and
/// `concrete` lists the concrete actions below them.
struct VerificationCase {
  int id = 0;
  std::uint64_t seed = 0;
  Method method = Method::InterII;
  Vocabulary vocabulary;
  std::vector<ActionDescription> instances;
  std::vector<ActionDescription> concrete;
  GroupingPlan grouping;
  StateDistribution initial;
};

struct VerificationFailure {
  int case_id = 0;
  std::uint64_t seed = 0;
  std::string method;
  /// The query, or what went wrong when there is none.
  std::string description;
  double concrete_value = 0.0;
  /// Abstract probability interval, or expected-utility bounds for planner
  /// checks.
  double lo = 0.0;
  double hi = 0.0;
};

struct VerificationReport {
  std::uint64_t cases_run = 0;
  std::vector<VerificationFailure> failures;
  double elapsed_seconds = 0.0;

  bool sound() const { return failures.empty(); }
  void merge(const VerificationReport& other);
};

/// Largest transition set the exhaustive query check accepts.
inline constexpr std::size_t kMaxCheckedTransitions = 16;
/// Random cases are redrawn above this many transitions.
inline constexpr std::size_t kRandomCaseTransitions = 12;

/// Builds the case's abstract action and checks it.
VerificationReport check_abstraction(const VerificationCase& c);

/// Checks `abstract` against the case's concrete actions: for every set of
/// transitions any of them can produce (which covers every query, including
/// ones over start-time terms) each concrete probability must fall inside
/// the abstract interval, to within 1e-9.
VerificationReport check_abstract_action(const VerificationCase& c,
                                         const ActionDescription& abstract);

/// Reproducible random case for the method; nested inter Method II cases
/// stack intra Method II or inter abstractions below it. Cases whose
/// transition set is too large for the exhaustive check are redrawn.
VerificationCase random_case(Method m, std::uint64_t seed, int id);

/// Per-case seed derived from the run seed, method and case index.
std::uint64_t case_seed(std::uint64_t run_seed, Method m, int id);

/// `cases` random cases per method.
VerificationReport verify_methods(std::span<const Method> methods, int cases,
                                  std::uint64_t seed);

/// Method II applied to the case's concrete inputs with the case's grouping
/// must give intervals containing Method I's for every query. Only the
/// non-nested intra/inter pairing is compared.
VerificationReport check_method_ordering(const VerificationCase& c);

enum class Mutation { NarrowProbability, StrengthenEffect, DropDisjunct };
const char* mutation_name(Mutation m);

/// A corrupted copy of `abstract`, or nothing when the mutation does not
/// apply to it.
std::optional<ActionDescription> mutate(const ActionDescription& abstract, Mutation m,
                                        const Vocabulary& v);

/// Runs search and compares its optimal set with exhaustive enumeration,
/// using an expected-utility computation of its own. Throws BoundError past
/// `limit` concrete plans.
VerificationReport check_planner(const Network& net, const std::string& root,
                                 std::uint64_t limit = 10000);

/// Exact expected utility of a concrete plan, computed independently of the
/// chronicle module.
double brute_force_expected_utility(std::span<const ActionDescription* const> plan,
                                    const Vocabulary& v, const StateDistribution& d0,
                                    const UtilityFunction& u);

}  // namespace pact
