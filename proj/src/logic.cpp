#include "probint/logic.hpp"

#include <cctype>
#include <functional>
#include <sstream>

#include "probint/error.hpp"

namespace probint {

namespace {

std::string describe_parse_error(std::size_t position,
                                 const std::vector<std::string>& expected,
                                 const std::string& found) {
  std::string msg = "parse error at offset " + std::to_string(position) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  msg += ", found " + found;
  return msg;
}

}  // namespace

ParseError::ParseError(std::size_t position, std::vector<std::string> expected,
                       const std::string& found)
    : Error(describe_parse_error(position, expected, found)),
      position_(position),
      expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string name;
  std::size_t hash;
  // Children are stored by value; a null node_ marks "absent".
  Formula left{nullptr};
  Formula right{nullptr};
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::string& empty_string() {
  static const std::string empty;
  return empty;
}

}  // namespace

Formula Formula::make(Kind kind, std::string name, const Formula* l, const Formula* r) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  std::size_t h = mix(0, static_cast<std::size_t>(kind));
  if (kind == Kind::Variable) h = mix(h, std::hash<std::string>{}(name));
  if (l) {
    node->left = *l;
    h = mix(h, l->hash());
  }
  if (r) {
    node->right = *r;
    h = mix(h, r->hash());
  }
  node->name = std::move(name);
  node->hash = h;
  return Formula(std::move(node));
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty() || name == "true" || name == "false") return false;
  std::size_t i = 0;
  while (true) {
    if (i >= name.size()) return false;
    char c = name[i];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return false;
    ++i;
    while (i < name.size() &&
           (std::isalnum(static_cast<unsigned char>(name[i])) || name[i] == '_')) {
      ++i;
    }
    if (i == name.size()) return true;
    if (name.substr(i, 2) != "::") return false;
    i += 2;
  }
}

Formula Formula::Var(std::string name) {
  if (!is_valid_identifier(name)) {
    throw ValidationError("invalid variable name '" + name + "'");
  }
  return make(Kind::Variable, std::move(name), nullptr, nullptr);
}

Formula Formula::True() {
  static const Formula t = make(Kind::True, {}, nullptr, nullptr);
  return t;
}

Formula Formula::False() {
  static const Formula f = make(Kind::False, {}, nullptr, nullptr);
  return f;
}

Formula Formula::Not(Formula child) { return make(Kind::Not, {}, &child, nullptr); }
Formula Formula::And(Formula l, Formula r) { return make(Kind::And, {}, &l, &r); }
Formula Formula::Or(Formula l, Formula r) { return make(Kind::Or, {}, &l, &r); }
Formula Formula::Implies(Formula l, Formula r) { return make(Kind::Implies, {}, &l, &r); }
Formula Formula::Iff(Formula l, Formula r) { return make(Kind::Iff, {}, &l, &r); }

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const {
  return node_->kind == Kind::Variable ? node_->name : empty_string();
}
const Formula& Formula::left() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.kind()) {
    case Formula::Kind::Variable:
      return a.name() == b.name();
    case Formula::Kind::True:
    case Formula::Kind::False:
      return true;
    case Formula::Kind::Not:
      return a.left() == b.left();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier '" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, start, ""};
    char c = text_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      return Token{k, start, std::string(1, c)};
    };
    switch (c) {
      case '!': return single(Tok::Not);
      case '&': return single(Tok::And);
      case '|': return single(Tok::Or);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      default: break;
    }
    if (text_.substr(pos_, 3) == "<->") {
      pos_ += 3;
      return {Tok::Iff, start, "<->"};
    }
    if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return {Tok::Implies, start, "->"};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word = read_word();
      while (text_.substr(pos_, 2) == "::") {
        std::size_t save = pos_;
        pos_ += 2;
        if (pos_ < text_.size() &&
            (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          word += "::" + read_word();
        } else {
          pos_ = save;
          break;
        }
      }
      if (word == "true") return {Tok::True, start, word};
      if (word == "false") return {Tok::False, start, word};
      return {Tok::Ident, start, word};
    }
    throw ParseError(start, {"formula"}, "character '" + std::string(1, c) + "'");
  }

 private:
  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string read_word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  Formula parse_all() {
    Formula f = parse_iff();
    if (cur_.kind != Tok::End) fail({"'&'", "'|'", "'->'", "'<->'", "end of input"});
    return f;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    throw ParseError(cur_.pos, std::move(expected), describe(cur_));
  }

  Formula parse_iff() {
    Formula f = parse_impl();
    while (cur_.kind == Tok::Iff) {
      advance();
      f = Formula::Iff(f, parse_impl());
    }
    return f;
  }

  Formula parse_impl() {
    Formula f = parse_disj();
    if (cur_.kind == Tok::Implies) {
      advance();
      return Formula::Implies(f, parse_impl());
    }
    return f;
  }

  Formula parse_disj() {
    Formula f = parse_conj();
    while (cur_.kind == Tok::Or) {
      advance();
      f = Formula::Or(f, parse_conj());
    }
    return f;
  }

  Formula parse_conj() {
    Formula f = parse_unary();
    while (cur_.kind == Tok::And) {
      advance();
      f = Formula::And(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (cur_.kind == Tok::Not) {
      advance();
      return Formula::Not(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    switch (cur_.kind) {
      case Tok::Ident: {
        Formula f = Formula::Var(cur_.text);
        advance();
        return f;
      }
      case Tok::True:
        advance();
        return Formula::True();
      case Tok::False:
        advance();
        return Formula::False();
      case Tok::LParen: {
        advance();
        Formula f = parse_iff();
        if (cur_.kind != Tok::RParen) fail({"'&'", "'|'", "'->'", "'<->'", "')'"});
        advance();
        return f;
      }
      default:
        fail({"identifier", "'true'", "'false'", "'('", "'!'"});
    }
  }

  Lexer lexer_;
  Token cur_{Tok::End, 0, ""};
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

const char* symbol(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return " <-> ";
    case Formula::Kind::Implies: return " -> ";
    case Formula::Kind::Or: return " | ";
    case Formula::Kind::And: return " & ";
    default: return "";
  }
}

void print(const Formula& f, std::string& out) {
  auto child = [&out](const Formula& c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  switch (f.kind()) {
    case Formula::Kind::Variable: out += f.name(); return;
    case Formula::Kind::True: out += "true"; return;
    case Formula::Kind::False: out += "false"; return;
    case Formula::Kind::Not:
      out += '!';
      child(f.left(), precedence(f.left().kind()) < precedence(Formula::Kind::Not));
      return;
    default: break;
  }
  int p = precedence(f.kind());
  bool right_assoc = f.kind() == Formula::Kind::Implies;
  int lp = precedence(f.left().kind());
  int rp = precedence(f.right().kind());
  child(f.left(), lp < p || (lp == p && right_assoc));
  out += symbol(f.kind());
  child(f.right(), rp < p || (rp == p && !right_assoc));
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

// ---------------------------------------------------------------------------
// Semantics

void collect_vars(const Formula& f, VarSet& out) {
  switch (f.kind()) {
    case Formula::Kind::Variable: out.insert(f.name()); return;
    case Formula::Kind::True:
    case Formula::Kind::False: return;
    case Formula::Kind::Not: collect_vars(f.left(), out); return;
    default:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
  }
}

VarSet vars(const Formula& f) {
  VarSet out;
  collect_vars(f, out);
  return out;
}

bool eval(const Formula& f, const Assignment& mu) {
  switch (f.kind()) {
    case Formula::Kind::Variable: {
      auto it = mu.find(f.name());
      if (it == mu.end()) throw UnboundVariable(f.name());
      return it->second;
    }
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !eval(f.left(), mu);
    case Formula::Kind::And: return eval(f.left(), mu) && eval(f.right(), mu);
    case Formula::Kind::Or: return eval(f.left(), mu) || eval(f.right(), mu);
    case Formula::Kind::Implies: return !eval(f.left(), mu) || eval(f.right(), mu);
    case Formula::Kind::Iff: return eval(f.left(), mu) == eval(f.right(), mu);
  }
  return false;
}

void check_expansion(std::size_t count, std::size_t cap) {
  if (count > cap || count > 62) throw ExpansionTooLarge(count, cap);
}

Evaluator::Index index_variables(const VarSet& names) {
  Evaluator::Index index;
  unsigned i = 0;
  for (const auto& n : names) index.emplace(n, i++);
  return index;
}

bool equivalent(const Formula& f, const Formula& g, std::size_t cap) {
  if (f == g) return true;
  VarSet all = vars(f);
  collect_vars(g, all);
  check_expansion(all.size(), cap);
  auto index = index_variables(all);
  Evaluator ef(f, index);
  Evaluator eg(g, index);
  const std::uint64_t total = std::uint64_t{1} << all.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    if (ef(bits) != eg(bits)) return false;
  }
  return true;
}

std::string qualified_name(std::string_view prefix, std::string_view name) {
  std::string out(prefix);
  out += "::";
  out += name;
  return out;
}

Formula rename_vars(const Formula& f, std::string_view prefix) {
  if (!is_valid_identifier(prefix)) {
    throw ValidationError("invalid rename prefix '" + std::string(prefix) + "'");
  }
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case Formula::Kind::Variable: return Formula::Var(qualified_name(prefix, g.name()));
      case Formula::Kind::True:
      case Formula::Kind::False: return g;
      case Formula::Kind::Not: return Formula::Not(go(g.left()));
      case Formula::Kind::And: return Formula::And(go(g.left()), go(g.right()));
      case Formula::Kind::Or: return Formula::Or(go(g.left()), go(g.right()));
      case Formula::Kind::Implies: return Formula::Implies(go(g.left()), go(g.right()));
      case Formula::Kind::Iff: return Formula::Iff(go(g.left()), go(g.right()));
    }
    return g;
  };
  return go(f);
}

Formula conjoin(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::True();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::And(acc, parts[i]);
  return acc;
}

Formula disjoin(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::False();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::Or(acc, parts[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(const Formula& f, const Index& index) { root_ = compile(f, index); }

std::uint32_t Evaluator::compile(const Formula& f, const Index& index) {
  Op op{f.kind()};
  switch (f.kind()) {
    case Formula::Kind::Variable: {
      auto it = index.find(f.name());
      if (it == index.end()) throw UnboundVariable(f.name());
      op.a = it->second;
      break;
    }
    case Formula::Kind::True:
    case Formula::Kind::False: break;
    case Formula::Kind::Not: op.a = compile(f.left(), index); break;
    default:
      op.a = compile(f.left(), index);
      op.b = compile(f.right(), index);
  }
  ops_.push_back(op);
  return static_cast<std::uint32_t>(ops_.size() - 1);
}

bool Evaluator::eval_node(std::uint32_t at, std::uint64_t bits) const {
  const Op& op = ops_[at];
  switch (op.kind) {
    case Formula::Kind::Variable: return (bits >> op.a) & 1U;
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !eval_node(op.a, bits);
    case Formula::Kind::And: return eval_node(op.a, bits) && eval_node(op.b, bits);
    case Formula::Kind::Or: return eval_node(op.a, bits) || eval_node(op.b, bits);
    case Formula::Kind::Implies: return !eval_node(op.a, bits) || eval_node(op.b, bits);
    case Formula::Kind::Iff: return eval_node(op.a, bits) == eval_node(op.b, bits);
  }
  return false;
}

}  // namespace probint
