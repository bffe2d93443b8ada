#include "tgd/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "tgd/errors.hpp"

namespace tgd {

bool is_null_name(const std::string& ident) {
  static const std::regex re("n[0-9]+");
  return std::regex_match(ident, re);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool Database::contains(const Atom& a) const { return std::find(facts.begin(), facts.end(), a) != facts.end(); }

void Database::add(Atom a) {
  if (!contains(a)) facts.push_back(std::move(a));
}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Arrow, Question, Colon, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      int l = line_, c = col_;
      char ch = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
        std::string id;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          id += advance();
        out.push_back({Tok::Ident, id, l, c});
        continue;
      }
      if (ch == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", l, c});
        continue;
      }
      Tok k;
      switch (ch) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case '.': k = Tok::Dot; break;
        case '?': k = Tok::Question; break;
        case ':': k = Tok::Colon; break;
        default:
          throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
      }
      advance();
      out.push_back({k, std::string(1, ch), l, c});
    }
  }

 private:
  char advance() {
    char ch = src_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }
  void skip() {
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const char* describe(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::Question: return "'?'";
    case Tok::Colon: return "':'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct PosAtom {
  Atom atom;
  std::vector<std::pair<int, int>> arg_pos;
  int line, col;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  bool at(Tok k) const { return toks_[i_].kind == k; }
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  const Token& expect(Tok k) {
    if (!at(k)) fail(std::string("expected ") + describe(k) + ", found " + describe(peek().kind) +
                     (peek().text.empty() ? "" : " '" + peek().text + "'"));
    return toks_[i_++];
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }

  PosAtom atom() {
    const Token& p = expect(Tok::Ident);
    if (!std::islower(static_cast<unsigned char>(p.text[0])))
      throw ParseError("predicate '" + p.text + "' must start with a lowercase letter", p.line, p.col);
    PosAtom out{{p.text, {}}, {}, p.line, p.col};
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      for (;;) {
        const Token& t = expect(Tok::Ident);
        out.atom.args.push_back(term(t));
        out.arg_pos.emplace_back(t.line, t.col);
        if (at(Tok::Comma)) {
          ++i_;
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen);
    check_arity(out);
    return out;
  }

  std::vector<PosAtom> atoms() {
    std::vector<PosAtom> out{atom()};
    while (at(Tok::Comma)) {
      ++i_;
      out.push_back(atom());
    }
    return out;
  }

  static Term term(const Token& t) {
    if (is_null_name(t.text))
      throw ParseError("'" + t.text + "' is reserved for labelled nulls", t.line, t.col);
    char c = t.text[0];
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') return Term::variable(t.text);
    return Term::constant(t.text);
  }

  void check_arity(const PosAtom& a) {
    auto [it, fresh] = signature.emplace(a.atom.predicate, a.atom.arity());
    if (!fresh && it->second != a.atom.arity())
      throw ParseError("predicate " + a.atom.predicate + " used with arity " + std::to_string(a.atom.arity()) +
                           ", previously " + std::to_string(it->second),
                       a.line, a.col);
  }

  std::map<std::string, std::size_t> signature;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

std::vector<Atom> strip(const std::vector<PosAtom>& as) {
  std::vector<Atom> out;
  for (const auto& a : as) out.push_back(a.atom);
  return out;
}

}  // namespace

SourceRuleSet parse_rules(const std::string& text) {
  Parser p(text);
  SourceRuleSet out;
  std::set<std::string> ids;
  while (!p.at(Tok::End)) {
    TGD rule;
    const Token& start = p.peek();
    if (p.at(Tok::Ident) && p.peek(1).kind == Tok::Colon) {
      rule.id = p.expect(Tok::Ident).text;
      p.expect(Tok::Colon);
    } else {
      rule.id = "r" + std::to_string(out.rules.size() + 1);
    }
    if (!ids.insert(rule.id).second) throw ParseError("duplicate rule id " + rule.id, start.line, start.col);

    auto body = p.atoms();
    p.expect(Tok::Arrow);
    std::vector<Token> exists;
    if (p.at(Tok::Ident) && p.peek().text == "exists" && p.peek(1).kind == Tok::Ident) {
      ++p.i_;
      for (;;) {
        exists.push_back(p.expect(Tok::Ident));
        if (p.at(Tok::Comma)) {
          ++p.i_;
          continue;
        }
        break;
      }
      p.expect(Tok::Dot);
    }
    auto head = p.atoms();
    p.expect(Tok::Dot);

    rule.body = strip(body);
    rule.head = strip(head);
    auto body_vars = variables_of(rule.body);
    std::set<std::string> bv(body_vars.begin(), body_vars.end());
    for (const auto& a : rule.body)
      for (const auto& t : a.args)
        if (t.is_constant()) out.constants.insert(t.name());
    for (const auto& z : exists) {
      if (!std::isupper(static_cast<unsigned char>(z.text[0])) && z.text[0] != '_')
        throw ParseError("existential '" + z.text + "' must be a variable", z.line, z.col);
      if (bv.count(z.text)) throw ParseError("existential variable " + z.text + " used in body", z.line, z.col);
      if (rule.is_existential(z.text))
        throw ParseError("existential " + z.text + " declared twice", z.line, z.col);
      rule.exist_vars.push_back(z.text);
    }
    std::set<std::string> head_vars;
    for (const auto& a : head)
      for (std::size_t k = 0; k < a.atom.args.size(); ++k) {
        const Term& t = a.atom.args[k];
        if (t.is_constant()) out.constants.insert(t.name());
        if (!t.is_variable()) continue;
        head_vars.insert(t.name());
        if (!bv.count(t.name()) && !rule.is_existential(t.name()))
          throw ParseError("head variable " + t.name() + " is neither in the body nor declared with exists",
                           a.arg_pos[k].first, a.arg_pos[k].second);
      }
    for (const auto& z : exists)
      if (!head_vars.count(z.text))
        throw ParseError("existential " + z.text + " does not occur in the head", z.line, z.col);
    out.rules.push_back(std::move(rule));
  }
  out.signature = std::move(p.signature);
  return out;
}

Database parse_facts(const std::string& text) {
  Parser p(text);
  Database db;
  while (!p.at(Tok::End)) {
    auto a = p.atom();
    for (std::size_t k = 0; k < a.atom.args.size(); ++k)
      if (!a.atom.args[k].is_constant())
        throw ParseError("facts must be ground; found variable " + a.atom.args[k].name(), a.arg_pos[k].first,
                         a.arg_pos[k].second);
    p.expect(Tok::Dot);
    db.add(std::move(a.atom));
  }
  return db;
}

Query parse_query(const std::string& text) {
  Parser p(text);
  p.expect(Tok::Question);
  Query q{strip(p.atoms())};
  if (p.at(Tok::Dot)) p.expect(Tok::Dot);
  p.expect(Tok::End);
  return q;
}

void check_signature(const SourceRuleSet& rules, const Database& db) {
  std::map<std::string, std::size_t> sig = rules.signature;
  for (const auto& f : db.facts) {
    auto [it, fresh] = sig.emplace(f.predicate, f.arity());
    if (!fresh && it->second != f.arity())
      throw ParseError("fact " + f.str() + " conflicts with arity " + std::to_string(it->second) + " of " +
                           f.predicate,
                       0, 0);
  }
}

std::string render(const TGD& rule, std::size_t position) {
  std::string prefix;
  if (rule.id != "r" + std::to_string(position + 1)) prefix = rule.id + ": ";
  return prefix + rule.str();
}

std::string render(const SourceRuleSet& rules) {
  std::string out;
  for (std::size_t i = 0; i < rules.rules.size(); ++i) out += render(rules.rules[i], i) + "\n";
  return out;
}

std::string render(const std::vector<NormalTGD>& rules) {
  std::string out;
  for (std::size_t i = 0; i < rules.size(); ++i) out += render(rules[i].tgd(), i) + "\n";
  return out;
}

std::string render(const Database& db) {
  std::string out;
  for (const auto& f : db.facts) out += f.str() + ".\n";
  return out;
}

std::string render(const Query& q) { return "? " + join_atoms(q.atoms); }

}  // namespace tgd
