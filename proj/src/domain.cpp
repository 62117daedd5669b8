#include "pact/domain.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace pact {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (ident_start(c)) {
      std::size_t j = i + 1;
      // A hyphen joins words (mountain-road) but not a subtraction.
      while (j < line.size() &&
             (ident_char(line[j]) ||
              (line[j] == '-' && j + 1 < line.size() && ident_start(line[j + 1]))))
        ++j;
      out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j + 1 < line.size() && line[j] == '.' && std::isdigit(static_cast<unsigned char>(line[j + 1]))) {
        ++j;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      }
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '-' || line[k] == '+')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          j = k;
          while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    static const char* const kSymbols[] = {"..", ":=", "+=", "-=", "!=", "<=", ">=", "&&", "||",
                                           "(",  ")",  "[",  "]",  "{",  "}",  ",",  ";",
                                           ":",  "=",  "<",  ">",  "+",  "-",  "@",  "&",
                                           "|",  "!",  "."};
    bool matched = false;
    for (const char* s : kSymbols) {
      const std::string_view sym(s);
      if (line.substr(i, sym.size()) == sym) {
        out.push_back({Tok::Symbol, std::string(sym), col});
        i += sym.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(line_no, col, fmt::format("unexpected character '{}'", c));
  }
  out.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

/// Token stream over one line.
class Cursor {
 public:
  Cursor(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view text) const {
    return peek().kind != Tok::End && peek().kind != Tok::Number && peek().text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  void expect(std::string_view text) {
    if (!accept(text)) fail(fmt::format("expected '{}'", text));
  }
  std::string ident(std::string_view what) {
    if (peek().kind != Tok::Ident) fail("expected " + std::string(what));
    return next().text;
  }
  double number(std::string_view what) {
    bool negative = accept("-");
    if (peek().kind != Tok::Number) fail("expected " + std::string(what));
    const Token t = next();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw ParseError(line_, t.column, "malformed number '" + t.text + "'");
    return negative ? -v : v;
  }
  Value integer(std::string_view what) {
    const int col = peek().column;
    const double v = number(what);
    if (v != static_cast<double>(static_cast<Value>(v)))
      throw ParseError(line_, col, "expected an integer " + std::string(what));
    return static_cast<Value>(v);
  }
  void finish() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, peek().column, message);
  }
  int line() const { return line_; }
  int column() const { return peek().column; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_;
};

bool is_keyword(std::string_view s) {
  return s == "and" || s == "or" || s == "not" || s == "TRUE" || s == "FALSE";
}

class SentenceParser {
 public:
  SentenceParser(Cursor& c, const Vocabulary& v) : c_(c), v_(v) {}

  Sentence parse() { return disjunction(); }

 private:
  Sentence disjunction() {
    std::vector<Sentence> parts{conjunction()};
    while (c_.accept("or") || c_.accept("||") || c_.accept("|")) parts.push_back(conjunction());
    return Sentence::any_of(parts);
  }

  Sentence conjunction() {
    std::vector<Sentence> parts{negation()};
    while (c_.accept("and") || c_.accept("&&") || c_.accept("&")) parts.push_back(negation());
    return Sentence::all_of(parts);
  }

  Sentence negation() {
    if (c_.accept("not") || c_.accept("!")) return !negation();
    if (c_.accept("(")) {
      Sentence s = disjunction();
      c_.expect(")");
      return s;
    }
    if (c_.accept("TRUE")) return Sentence::truth();
    if (c_.accept("FALSE")) return Sentence::falsity();
    return atom();
  }

  Term term(const std::string& name, int col) {
    const auto f = v_.index_of(name);
    if (!f) throw ParseError(c_.line(), col, "unknown fluent '" + name + "'");
    Term t{*f, Moment::End};
    if (c_.accept("@")) {
      const int mcol = c_.column();
      const std::string m = c_.ident("start or end");
      if (m == "start")
        t.moment = Moment::Start;
      else if (m != "end")
        throw ParseError(c_.line(), mcol, "expected start or end after '@'");
    }
    return t;
  }

  Sentence atom() {
    const int col = c_.column();
    if (c_.peek().kind != Tok::Ident) c_.fail("expected a fluent");
    const Term lhs = term(c_.next().text, col);
    static const std::pair<const char*, Relation> kRelations[] = {
        {"=", Relation::Eq}, {"!=", Relation::Ne}, {"<=", Relation::Le},
        {">=", Relation::Ge}, {"<", Relation::Lt}, {">", Relation::Gt}};
    std::optional<Relation> rel;
    for (const auto& [text, r] : kRelations)
      if (c_.accept(text)) {
        rel = r;
        break;
      }
    if (!rel) c_.fail("expected a relation");
    const Domain& dom = v_.fluent(lhs.fluent).domain;
    const int rcol = c_.column();
    if (c_.peek().kind == Tok::Ident && !is_keyword(c_.peek().text)) {
      const std::string name = c_.next().text;
      if (v_.index_of(name)) {
        const Term rhs = term(name, rcol);
        Value offset = 0;
        if (c_.is("+") || c_.is("-")) {
          const bool minus = c_.next().text == "-";
          offset = c_.integer("offset");
          if (minus) offset = -offset;
        }
        return checked(Sentence::compare(lhs, *rel, rhs, offset), rcol);
      }
      const auto value = dom.parse(name);
      if (!value)
        throw ParseError(c_.line(), rcol,
                         fmt::format("'{}' is neither a fluent nor a value of '{}'", name,
                                     v_.fluent(lhs.fluent).name));
      return checked(Sentence::compare(lhs, *rel, *value), rcol);
    }
    const Value value = c_.integer("value");
    return checked(Sentence::compare(lhs, *rel, value), rcol);
  }

  Sentence checked(Sentence s, int col) {
    try {
      s.validate(v_);
    } catch (const ValidationError& e) {
      throw ParseError(c_.line(), col, e.what());
    }
    return s;
  }

  Cursor& c_;
  const Vocabulary& v_;
};

Sentence sentence_at(Cursor& c, const Vocabulary& v) { return SentenceParser(c, v).parse(); }

/// Splits a line into words, keeping 1-based columns.
std::vector<std::pair<std::string, int>> words(std::string_view line) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.emplace_back(std::string(line.substr(i, j - i)), static_cast<int>(i) + 1);
    i = j;
  }
  return out;
}

class DomainParser {
 public:
  explicit DomainParser(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find('\n', start);
      std::string line(text.substr(start, end == std::string_view::npos ? text.size() - start
                                                                       : end - start));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(std::move(line));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  }

  DomainFile parse() {
    while (row_ < lines_.size()) {
      Cursor c = cursor();
      ++row_;
      if (c.at_end()) continue;
      const int col = c.column();
      const std::string keyword = c.ident("a declaration");
      if (keyword != "fluent" && !vocab_ready_) {
        if (fluents_.empty()) throw ParseError(c.line(), col, "missing vocabulary: declare fluents first");
        finish_vocabulary(c.line());
      }
      if (keyword == "fluent") {
        if (vocab_ready_) throw ParseError(c.line(), col, "fluents must be declared before anything else");
        fluent(c);
      } else if (keyword == "initial") {
        initial(c);
      } else if (keyword == "action") {
        action(c);
      } else if (keyword == "abstraction") {
        abstraction(c);
      } else if (keyword == "decompose") {
        decompose(c);
      } else if (keyword == "utility") {
        utility(c);
      } else if (keyword == "root") {
        out_.root = c.ident("root name");
        c.finish();
      } else if (keyword == "uniform") {
        UniformShape s;
        s.n = c.integer("n");
        s.p = c.integer("p");
        s.k = c.integer("k");
        c.finish();
        if (s.n < 1 || s.p < 1 || s.k < 1) throw ParseError(c.line(), col, "uniform shape needs n, p, k >= 1");
        out_.uniform = s;
      } else {
        throw ParseError(c.line(), col, "unknown declaration '" + keyword + "'");
      }
    }
    if (fluents_.empty()) throw ParseError(1, 1, "missing vocabulary: no fluent declarations");
    if (!vocab_ready_) finish_vocabulary(static_cast<int>(lines_.size()));
    if (!has_initial_) out_.initial = StateDistribution::point(out_.vocabulary, State(out_.defaults));
    if (!out_.root.empty()) {
      bool known = out_.find_action(out_.root) || out_.find_abstraction(out_.root);
      for (const auto& t : out_.tasks) known = known || t.name == out_.root;
      if (!known) throw ValidationError("root '" + out_.root + "' is not declared");
    }
    return out_;
  }

 private:
  Cursor cursor() const {
    return Cursor(tokenize(lines_[row_], static_cast<int>(row_) + 1), static_cast<int>(row_) + 1);
  }

  void fluent(Cursor& c) {
    const int col = c.column();
    const std::string name = c.ident("fluent name");
    static const std::set<std::string> kReserved = {
        "elapsed", "prob", "effect", "when", "conj", "disj", "none", "any", "unchanged", "end"};
    if (is_keyword(name) || kReserved.count(name))
      throw ParseError(c.line(), col, "'" + name + "' is reserved");
    c.expect(":");
    std::optional<Domain> dom;
    if (c.accept("{")) {
      std::vector<std::string> symbols;
      do {
        symbols.push_back(c.ident("symbol"));
      } while (c.accept(","));
      c.expect("}");
      try {
        dom = Domain::symbols(symbols);
      } catch (const ValidationError& e) {
        throw ParseError(c.line(), col, e.what());
      }
    } else {
      const Value lo = c.integer("lower bound");
      c.expect("..");
      const Value hi = c.integer("upper bound");
      try {
        dom = Domain::range(lo, hi);
      } catch (const ValidationError& e) {
        throw ParseError(c.line(), col, e.what());
      }
    }
    Value def = dom->min();
    if (c.accept("=")) def = value_for(c, *dom, name);
    c.finish();
    for (const auto& f : fluents_) {
      if (f.name == name) throw ParseError(c.line(), col, "duplicate fluent '" + name + "'");
      if (f.domain.parse(name) && f.domain.is_symbolic())
        throw ParseError(c.line(), col, "fluent '" + name + "' clashes with a symbol of '" + f.name + "'");
      if (dom->is_symbolic())
        for (const auto& s : dom->symbol_names())
          if (s == f.name)
            throw ParseError(c.line(), col, "symbol '" + s + "' clashes with fluent '" + f.name + "'");
    }
    if (dom->is_symbolic())
      for (const auto& s : dom->symbol_names())
        if (s == name) throw ParseError(c.line(), col, "symbol '" + s + "' clashes with its fluent");
    fluents_.push_back({name, *dom});
    out_.defaults.push_back(def);
  }

  Value value_for(Cursor& c, const Domain& dom, const std::string& fluent) {
    const int col = c.column();
    if (dom.is_symbolic()) {
      const std::string s = c.ident("value");
      const auto v = dom.parse(s);
      if (!v) throw ParseError(c.line(), col, "'" + s + "' is not a value of '" + fluent + "'");
      return *v;
    }
    const Value v = c.integer("value");
    if (!dom.contains(v))
      throw ParseError(c.line(), col, fmt::format("{} is outside the domain of '{}'", v, fluent));
    return v;
  }

  void finish_vocabulary(int line) {
    try {
      out_.vocabulary = Vocabulary(fluents_);
    } catch (const ValidationError& e) {
      throw ParseError(line, 1, e.what());
    }
    vocab_ready_ = true;
  }

  const Vocabulary& vocab() const { return out_.vocabulary; }

  std::size_t fluent_index(Cursor& c) {
    const int col = c.column();
    const std::string name = c.ident("fluent");
    const auto f = vocab().index_of(name);
    if (!f) throw ParseError(c.line(), col, "unknown fluent '" + name + "'");
    return *f;
  }

  double probability(Cursor& c) {
    const int col = c.column();
    const double p = c.number("probability");
    if (!(p >= 0.0 && p <= 1.0))
      throw ParseError(c.line(), col, fmt::format("probability {} outside [0,1]", p));
    return p;
  }

  /// Opens a block; returns the cursor of each body line until `end`.
  template <typename Fn>
  void block(int header_line, const std::string& what, Fn&& body) {
    while (true) {
      if (row_ >= lines_.size())
        throw ParseError(header_line, 1, what + " is missing its 'end'");
      Cursor c = cursor();
      ++row_;
      if (c.at_end()) continue;
      if (c.accept("end")) {
        c.finish();
        return;
      }
      body(c);
    }
  }

  void initial(Cursor& c) {
    c.finish();
    if (has_initial_) c.fail("duplicate initial block");
    const int header = c.line();
    std::vector<StateDistribution::Entry> entries;
    block(header, "initial block", [&](Cursor& line) {
      const double p = probability(line);
      std::vector<Value> values = out_.defaults;
      std::set<std::size_t> seen;
      while (!line.at_end()) {
        const int col = line.column();
        const std::size_t f = fluent_index(line);
        if (!seen.insert(f).second) throw ParseError(line.line(), col, "fluent assigned twice");
        line.expect("=");
        values[f] = value_for(line, vocab().fluent(f).domain, vocab().fluent(f).name);
      }
      entries.emplace_back(State(std::move(values)), p);
    });
    try {
      out_.initial = StateDistribution(vocab(), std::move(entries));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("line {}: initial distribution: {}", header, e.what()));
    }
    has_initial_ = true;
  }

  ConditionSpec condition(Cursor& c) {
    if (c.accept("[")) {
      ConditionList list;
      do {
        list.items.push_back(sentence_at(c, vocab()));
      } while (c.accept(";"));
      c.expect("]");
      return list;
    }
    if (c.accept("conj")) {
      ConjDisj cd;
      cd.conj = sentence_at(c, vocab());
      c.expect("disj");
      cd.disj = sentence_at(c, vocab());
      return cd;
    }
    return SingleCondition{sentence_at(c, vocab())};
  }

  ProbSpec prob(Cursor& c) {
    if (c.accept("[")) {
      ProbList list;
      do {
        list.items.push_back(probability(c));
      } while (c.accept(";"));
      c.expect("]");
      return list;
    }
    const int col = c.column();
    const double lo = probability(c);
    if (c.accept("..")) {
      const double hi = probability(c);
      if (lo > hi) throw ParseError(c.line(), col, "probability range is empty");
      return RangeProb{lo, hi};
    }
    return PointProb{lo};
  }

  Constraint constraint(Cursor& c, std::size_t f) {
    const Fluent& fl = vocab().fluent(f);
    const int col = c.column();
    Constraint out;
    if (c.accept(":=")) {
      if (c.accept("any")) {
        out = Constraint::anything();
      } else if (c.accept("{")) {
        std::vector<Value> values;
        do {
          values.push_back(value_for(c, fl.domain, fl.name));
        } while (c.accept(","));
        c.expect("}");
        out = Constraint::among(values);
      } else {
        out = Constraint::exact(value_for(c, fl.domain, fl.name));
      }
    } else if (c.is("+=") || c.is("-=")) {
      const bool minus = c.next().text == "-=";
      if (fl.domain.is_symbolic())
        throw ParseError(c.line(), col, "relative effect on symbolic fluent '" + fl.name + "'");
      if (c.accept("[")) {
        Value lo = c.integer("lower delta");
        c.expect(",");
        Value hi = c.integer("upper delta");
        c.expect("]");
        if (minus) std::tie(lo, hi) = std::make_pair(-hi, -lo);
        if (lo > hi) throw ParseError(c.line(), col, "relative range is empty");
        out = Constraint::relative_range(lo, hi);
      } else {
        const Value d = c.integer("delta");
        out = Constraint::relative(minus ? -d : d);
      }
    } else {
      c.fail("expected ':=', '+=' or '-='");
    }
    if (c.accept("or")) {
      c.expect("unchanged");
      out = Constraint::maybe_unchanged(out);
    }
    return out;
  }

  EffectSpec effect(Cursor& c) {
    EffectSpec e;
    if (c.accept("none")) return e;
    std::set<std::size_t> seen;
    do {
      const int col = c.column();
      const std::size_t f = fluent_index(c);
      if (!seen.insert(f).second) throw ParseError(c.line(), col, "fluent constrained twice");
      e.set(f, constraint(c, f));
    } while (c.accept(","));
    return e;
  }

  void action(Cursor& c) {
    ActionDescription a;
    const int header = c.line();
    a.name = c.ident("action name");
    while (!c.at_end()) {
      const int col = c.column();
      const std::string key = c.ident("'duration' or 'kind'");
      if (key == "duration") {
        a.duration = c.integer("duration");
        if (a.duration < 0) throw ParseError(c.line(), col, "duration must be non-negative");
      } else if (key == "kind") {
        const int kcol = c.column();
        const auto k = parse_kind(c.ident("kind"));
        if (!k) throw ParseError(c.line(), kcol, "unknown action kind");
        a.kind = *k;
      } else {
        throw ParseError(c.line(), col, "unexpected '" + key + "'");
      }
    }
    block(header, "action '" + a.name + "'", [&](Cursor&) {
      // Branch lines are re-read as words first so labels may contain '+'.
      const auto w = words(lines_[row_ - 1]);
      const int line_no = static_cast<int>(row_);
      if (w.front().first != "branch") throw ParseError(line_no, w.front().second, "expected 'branch' or 'end'");
      if (w.size() < 2) throw ParseError(line_no, w.front().second, "branch needs a label");
      Branch b;
      b.label = w[1].first;
      const std::size_t rest = static_cast<std::size_t>(w[1].second - 1) + w[1].first.size();
      std::string tail(rest, ' ');
      tail += lines_[row_ - 1].substr(rest);
      Cursor bc(tokenize(tail, line_no), line_no);
      bc.expect("when");
      b.condition = condition(bc);
      bc.expect("prob");
      b.prob = prob(bc);
      bc.expect("effect");
      b.effect = effect(bc);
      bc.finish();
      a.branches.push_back(std::move(b));
    });
    for (const auto& other : out_.actions)
      if (other.name == a.name) throw ParseError(header, 1, "duplicate action '" + a.name + "'");
    try {
      validate_action(a, vocab());
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("line {}: {}", header, e.what()));
    }
    out_.actions.push_back(std::move(a));
  }

  void abstraction(Cursor& c) {
    ChoiceNode node;
    const int header = c.line();
    node.name = c.ident("abstraction name");
    c.expect("method");
    const int mcol = c.column();
    const auto m = parse_method(c.ident("method"));
    if (!m) throw ParseError(c.line(), mcol, "unknown method (intra1, intra2, inter1, inter2)");
    node.method = *m;
    c.expect("of");
    while (!c.at_end()) node.instances.push_back(c.ident("instance name"));
    if (node.instances.empty()) c.fail("abstraction needs at least one instance");
    block(header, "abstraction '" + node.name + "'", [&](Cursor&) {
      const auto w = words(lines_[row_ - 1]);
      if (w.front().first != "group")
        throw ParseError(static_cast<int>(row_), w.front().second, "expected 'group' or 'end'");
      std::vector<std::string> group;
      for (std::size_t i = 1; i < w.size(); ++i) group.push_back(w[i].first);
      if (group.empty()) throw ParseError(static_cast<int>(row_), w.front().second, "empty group");
      node.groups.push_back(std::move(group));
    });
    out_.abstractions.push_back(std::move(node));
  }

  void decompose(Cursor& c) {
    TaskNode t;
    t.name = c.ident("task name");
    c.expect("=");
    while (!c.at_end()) t.steps.push_back(c.ident("step name"));
    if (t.steps.empty()) c.fail("decomposition needs at least one step");
    out_.tasks.push_back(std::move(t));
  }

  void utility(Cursor& c) {
    const int col = c.column();
    const std::string target = c.ident("fluent or 'elapsed'");
    std::optional<std::size_t> f;
    if (target != "elapsed") {
      f = vocab().index_of(target);
      if (!f) throw ParseError(c.line(), col, "unknown fluent '" + target + "'");
    }
    std::vector<UtilityFunction::Knot> knots;
    while (!c.at_end()) {
      UtilityFunction::Knot k;
      if (f && vocab().fluent(*f).domain.is_symbolic())
        k.x = value_for(c, vocab().fluent(*f).domain, target);
      else
        k.x = c.number("knot position");
      c.expect(":");
      k.u = c.number("knot utility");
      knots.push_back(k);
    }
    if (knots.empty()) c.fail("utility needs at least one knot");
    std::stable_sort(knots.begin(), knots.end(),
                     [](const auto& a, const auto& b) { return a.x < b.x; });
    if (f) {
      if (out_.utility.components().count(*f))
        throw ParseError(c.line(), col, "duplicate utility for '" + target + "'");
      out_.utility.set_component(*f, knots);
    } else {
      if (!out_.utility.elapsed().empty()) throw ParseError(c.line(), col, "duplicate utility for elapsed");
      out_.utility.set_elapsed(knots);
    }
    try {
      out_.utility.validate(vocab());
    } catch (const ValidationError& e) {
      throw ParseError(c.line(), col, e.what());
    }
  }

  std::vector<std::string> lines_;
  std::size_t row_ = 0;
  std::vector<Fluent> fluents_;
  bool vocab_ready_ = false;
  bool has_initial_ = false;
  DomainFile out_;
};

std::string format_number(double x) { return fmt::format("{}", x); }

}  // namespace

const ActionDescription* DomainFile::find_action(std::string_view name) const {
  for (const auto& a : actions)
    if (a.name == name) return &a;
  return nullptr;
}

const ChoiceNode* DomainFile::find_abstraction(std::string_view name) const {
  for (const auto& c : abstractions)
    if (c.name == name) return &c;
  return nullptr;
}

Network DomainFile::network() const {
  return Network(vocabulary, initial, utility, actions, abstractions, tasks, root, uniform);
}

DomainFile parse_domain(std::string_view text) { return DomainParser(text).parse(); }

DomainFile load_domain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_domain(buf.str());
}

Sentence parse_sentence(std::string_view text, const Vocabulary& v) {
  Cursor c(tokenize(text, 1), 1);
  if (c.at_end()) c.fail("empty sentence");
  Sentence s = sentence_at(c, v);
  c.finish();
  return s;
}

std::string format_condition(const ConditionSpec& c, const Vocabulary& v) {
  if (const auto* s = std::get_if<SingleCondition>(&c)) return s->sentence.to_string(v);
  if (const auto* cd = std::get_if<ConjDisj>(&c))
    return "conj " + cd->conj.to_string(v) + " disj " + cd->disj.to_string(v);
  std::string out = "[";
  const auto& items = std::get<ConditionList>(c).items;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "; ";
    out += items[i].to_string(v);
  }
  return out + "]";
}

std::string format_prob(const ProbSpec& p) {
  if (const auto* x = std::get_if<PointProb>(&p)) return format_number(x->p);
  if (const auto* r = std::get_if<RangeProb>(&p))
    return format_number(r->lo) + ".." + format_number(r->hi);
  std::string out = "[";
  const auto& items = std::get<ProbList>(p).items;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "; ";
    out += format_number(items[i]);
  }
  return out + "]";
}

std::string format_effect(const EffectSpec& e, const Vocabulary& v) {
  if (e.empty()) return "none";
  std::string out;
  for (const auto& [f, c] : e.entries()) {
    if (!out.empty()) out += ", ";
    const Fluent& fl = v.fluent(f);
    out += fl.name;
    switch (c.core()) {
      case Constraint::Core::Absolute:
        if (c.values().size() == 1) {
          out += " := " + fl.domain.format(c.values().front());
        } else {
          out += " := {";
          for (std::size_t i = 0; i < c.values().size(); ++i) {
            if (i) out += ", ";
            out += fl.domain.format(c.values()[i]);
          }
          out += "}";
        }
        break;
      case Constraint::Core::Relative:
        if (c.delta_lo() == c.delta_hi())
          out += c.delta_lo() < 0 ? fmt::format(" -= {}", -static_cast<long long>(c.delta_lo()))
                                  : fmt::format(" += {}", c.delta_lo());
        else
          out += fmt::format(" += [{}, {}]", c.delta_lo(), c.delta_hi());
        break;
      case Constraint::Core::Any:
        out += " := any";
        break;
      case Constraint::Core::None:
        break;
    }
    if (c.keeps_current()) out += " or unchanged";
  }
  return out;
}

std::string format_action(const ActionDescription& a, const Vocabulary& v) {
  std::string out = "action " + a.name + " duration " + std::to_string(a.duration);
  if (!a.is_concrete()) out += std::string(" kind ") + kind_name(a.kind);
  out += "\n";
  for (const auto& b : a.branches)
    out += "  branch " + b.label + " when " + format_condition(b.condition, v) + " prob " +
           format_prob(b.prob) + " effect " + format_effect(b.effect, v) + "\n";
  return out + "end\n";
}

std::string serialize_domain(const DomainFile& d) {
  const Vocabulary& v = d.vocabulary;
  std::string out;
  for (std::size_t f = 0; f < v.size(); ++f) {
    const Domain& dom = v.fluent(f).domain;
    out += "fluent " + v.fluent(f).name + " : ";
    if (dom.is_symbolic()) {
      out += "{";
      for (std::size_t i = 0; i < dom.symbol_names().size(); ++i) {
        if (i) out += ", ";
        out += dom.symbol_names()[i];
      }
      out += "}";
    } else {
      out += fmt::format("{}..{}", dom.min(), dom.max());
    }
    out += " = " + dom.format(d.defaults[f]) + "\n";
  }
  out += "\ninitial\n";
  for (const auto& [s, p] : d.initial.entries()) {
    out += "  " + format_number(p);
    for (std::size_t f = 0; f < v.size(); ++f)
      if (s[f] != d.defaults[f]) out += " " + v.fluent(f).name + "=" + v.fluent(f).domain.format(s[f]);
    out += "\n";
  }
  out += "end\n";
  for (const auto& a : d.actions) out += "\n" + format_action(a, v);
  for (const auto& c : d.abstractions) {
    out += "\nabstraction " + c.name + " method " + method_name(c.method) + " of";
    for (const auto& i : c.instances) out += " " + i;
    out += "\n";
    for (const auto& g : c.groups) {
      out += "  group";
      for (const auto& l : g) out += " " + l;
      out += "\n";
    }
    out += "end\n";
  }
  if (!d.tasks.empty()) out += "\n";
  for (const auto& t : d.tasks) {
    out += "decompose " + t.name + " =";
    for (const auto& s : t.steps) out += " " + s;
    out += "\n";
  }
  auto knots = [&](const std::vector<UtilityFunction::Knot>& ks, const Domain* dom) {
    std::string line;
    for (const auto& k : ks)
      line += " " + (dom ? dom->format(static_cast<Value>(k.x)) : format_number(k.x)) + ":" +
              format_number(k.u);
    return line;
  };
  if (!d.utility.components().empty() || !d.utility.elapsed().empty()) out += "\n";
  for (const auto& [f, ks] : d.utility.components()) {
    const Domain& dom = v.fluent(f).domain;
    out += "utility " + v.fluent(f).name + knots(ks, dom.is_symbolic() ? &dom : nullptr) + "\n";
  }
  if (!d.utility.elapsed().empty()) out += "utility elapsed" + knots(d.utility.elapsed(), nullptr) + "\n";
  if (!d.root.empty()) out += "\nroot " + d.root + "\n";
  if (d.uniform) out += fmt::format("uniform {} {} {}\n", d.uniform->n, d.uniform->p, d.uniform->k);
  return out;
}

}  // namespace pact
