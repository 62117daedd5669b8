#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "pact/worldmodel.hpp"

namespace pact {

namespace {

using Kind = Sentence::Node::Kind;

std::shared_ptr<const Sentence::Node> constant_node(bool value) {
  static const auto kTrue = [] {
    auto n = std::make_shared<Sentence::Node>();
    n->constant = true;
    return std::shared_ptr<const Sentence::Node>(n);
  }();
  static const auto kFalse = [] {
    auto n = std::make_shared<Sentence::Node>();
    n->constant = false;
    return std::shared_ptr<const Sentence::Node>(n);
  }();
  return value ? kTrue : kFalse;
}

bool compare_values(Value a, Relation rel, Value b) {
  switch (rel) {
    case Relation::Eq: return a == b;
    case Relation::Ne: return a != b;
    case Relation::Lt: return a < b;
    case Relation::Le: return a <= b;
    case Relation::Gt: return a > b;
    case Relation::Ge: return a >= b;
  }
  return false;
}

const char* relation_text(Relation rel) {
  switch (rel) {
    case Relation::Eq: return "=";
    case Relation::Ne: return "!=";
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
  }
  return "?";
}

bool is_ordering(Relation rel) { return rel != Relation::Eq && rel != Relation::Ne; }

void collect_fluents(const Sentence::Node& n, std::set<std::size_t>& out) {
  switch (n.kind) {
    case Kind::Constant: return;
    case Kind::Atom:
      out.insert(n.lhs.fluent);
      if (n.rhs_is_term) out.insert(n.rhs.fluent);
      return;
    default:
      for (const auto& c : n.children) collect_fluents(c.node(), out);
  }
}

std::string term_text(const Term& t, const Vocabulary& v) {
  std::string out = v.fluent(t.fluent).name;
  if (t.moment == Moment::Start) out += "@start";
  return out;
}

// Precedence: or = 1, and = 2, not/atom = 3.
int precedence(const Sentence::Node& n) {
  switch (n.kind) {
    case Kind::Or: return 1;
    case Kind::And: return 2;
    default: return 3;
  }
}

std::string render(const Sentence::Node& n, const Vocabulary& v) {
  switch (n.kind) {
    case Kind::Constant:
      return n.constant ? "TRUE" : "FALSE";
    case Kind::Atom: {
      const Domain& dom = v.fluent(n.lhs.fluent).domain;
      std::string out = term_text(n.lhs, v) + " " + relation_text(n.relation) + " ";
      if (!n.rhs_is_term) return out + dom.format(n.value);
      out += term_text(n.rhs, v);
      if (n.value > 0) out += fmt::format(" + {}", n.value);
      if (n.value < 0) out += fmt::format(" - {}", -static_cast<long long>(n.value));
      return out;
    }
    case Kind::Not: {
      const auto& child = n.children.front().node();
      std::string inner = render(child, v);
      if (precedence(child) < 3 || child.kind == Kind::Atom) inner = "(" + inner + ")";
      return "not " + inner;
    }
    case Kind::And:
    case Kind::Or: {
      const int mine = precedence(n);
      std::string out;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const auto& child = n.children[i].node();
        std::string part = render(child, v);
        if (precedence(child) <= mine) part = "(" + part + ")";
        if (i) out += n.kind == Kind::And ? " and " : " or ";
        out += part;
      }
      return out;
    }
  }
  return {};
}

bool same_node(const Sentence::Node& a, const Sentence::Node& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Constant: return a.constant == b.constant;
    case Kind::Atom:
      return a.lhs == b.lhs && a.relation == b.relation &&
             a.rhs_is_term == b.rhs_is_term && a.value == b.value &&
             (!a.rhs_is_term || a.rhs == b.rhs);
    default:
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!(a.children[i] == b.children[i])) return false;
      return true;
  }
}

}  // namespace

Sentence::Sentence() : node_(constant_node(true)) {}

Sentence Sentence::truth() { return Sentence(constant_node(true)); }
Sentence Sentence::falsity() { return Sentence(constant_node(false)); }

Sentence Sentence::compare(Term lhs, Relation rel, Value constant) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->lhs = lhs;
  n->relation = rel;
  n->value = constant;
  return Sentence(std::move(n));
}

Sentence Sentence::compare(Term lhs, Relation rel, Term rhs, Value offset) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->lhs = lhs;
  n->relation = rel;
  n->rhs_is_term = true;
  n->rhs = rhs;
  n->value = offset;
  return Sentence(std::move(n));
}

Sentence Sentence::equals(std::size_t fluent, Value value) {
  return compare(Term{fluent, Moment::End}, Relation::Eq, value);
}

Sentence Sentence::combine(bool conjunction, std::span<const Sentence> parts) {
  // Flattens nested operators of the same kind and folds constants.
  const Kind kind = conjunction ? Kind::And : Kind::Or;
  const bool absorbing = !conjunction;  // TRUE absorbs OR, FALSE absorbs AND
  std::vector<Sentence> kept;
  for (const auto& p : parts) {
    const auto& n = p.node();
    if (n.kind == Kind::Constant) {
      if (n.constant == absorbing) return Sentence(constant_node(absorbing));
      continue;
    }
    if (n.kind == kind) {
      for (const auto& c : n.children) kept.push_back(c);
    } else {
      kept.push_back(p);
    }
  }
  if (kept.empty()) return Sentence(constant_node(!absorbing));
  if (kept.size() == 1) return kept.front();
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(kept);
  return Sentence(std::move(n));
}

Sentence operator&&(const Sentence& a, const Sentence& b) {
  const Sentence parts[] = {a, b};
  return Sentence::all_of(parts);
}

Sentence operator||(const Sentence& a, const Sentence& b) {
  const Sentence parts[] = {a, b};
  return Sentence::any_of(parts);
}

Sentence operator!(const Sentence& a) {
  const auto& n = a.node();
  if (n.kind == Kind::Constant) return n.constant ? Sentence::falsity() : Sentence::truth();
  if (n.kind == Kind::Not) return n.children.front();
  auto out = std::make_shared<Sentence::Node>();
  out->kind = Kind::Not;
  out->children = {a};
  return Sentence(std::move(out));
}

Sentence Sentence::all_of(std::span<const Sentence> parts) {
  return combine(true, parts);
}

Sentence Sentence::any_of(std::span<const Sentence> parts) {
  return combine(false, parts);
}

bool Sentence::holds(const State& start, const State& end) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return n.constant;
    case Kind::Atom: {
      const State& ls = n.lhs.moment == Moment::Start ? start : end;
      const Value lhs = ls[n.lhs.fluent];
      Value rhs = n.value;
      if (n.rhs_is_term) {
        const State& rs = n.rhs.moment == Moment::Start ? start : end;
        rhs = rs[n.rhs.fluent] + n.value;
      }
      return compare_values(lhs, n.relation, rhs);
    }
    case Kind::Not:
      return !n.children.front().holds(start, end);
    case Kind::And:
      for (const auto& c : n.children)
        if (!c.holds(start, end)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : n.children)
        if (c.holds(start, end)) return true;
      return false;
  }
  return false;
}

bool Sentence::is_true() const {
  return node_->kind == Kind::Constant && node_->constant;
}

bool Sentence::is_false() const {
  return node_->kind == Kind::Constant && !node_->constant;
}

std::vector<std::size_t> Sentence::fluents() const {
  std::set<std::size_t> out;
  collect_fluents(*node_, out);
  return {out.begin(), out.end()};
}

void Sentence::validate(const Vocabulary& v) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return;
    case Kind::Atom: {
      if (n.lhs.fluent >= v.size() || (n.rhs_is_term && n.rhs.fluent >= v.size()))
        throw ValidationError("sentence references a fluent outside the vocabulary");
      const Fluent& lf = v.fluent(n.lhs.fluent);
      if (lf.domain.is_symbolic() && is_ordering(n.relation))
        throw ValidationError("ordering relation on symbolic fluent '" + lf.name + "'");
      if (!n.rhs_is_term) {
        if (!lf.domain.contains(n.value))
          throw ValidationError(fmt::format("value {} outside the domain of '{}'",
                                            lf.domain.format(n.value), lf.name));
        return;
      }
      const Fluent& rf = v.fluent(n.rhs.fluent);
      if (lf.domain.is_symbolic() != rf.domain.is_symbolic())
        throw ValidationError("comparison of '" + lf.name + "' with '" + rf.name +
                              "' mixes symbolic and integer fluents");
      if (lf.domain.is_symbolic() && !(lf.domain == rf.domain))
        throw ValidationError("comparison of '" + lf.name + "' with '" + rf.name +
                              "' mixes different symbolic domains");
      if (lf.domain.is_symbolic() && n.value != 0)
        throw ValidationError("offset applied to symbolic fluent '" + rf.name + "'");
      return;
    }
    default:
      for (const auto& c : n.children) c.validate(v);
  }
}

std::string Sentence::to_string(const Vocabulary& v) const { return render(*node_, v); }

bool Sentence::operator==(const Sentence& other) const {
  return same_node(*node_, *other.node_);
}

}  // namespace pact
