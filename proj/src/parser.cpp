// Surface-syntax and constructor-form parsers.

#include <array>
#include <cctype>
#include <charconv>
#include <limits>

#include "natded/syntax.hpp"

namespace natded {
namespace {

enum class Tok {
  Ident, Hash, LParen, RParen, Comma, Dot,
  Forall, Exists, Falsity, Truth,
  Not, And, Or, Imp, Iff, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t index = 0;  // Hash payload
  std::size_t pos = 0;
};

struct Spelling {
  std::string_view text;
  Tok kind;
};

// Longest spellings first where one is a prefix of another.
constexpr std::array<Spelling, 22> kOperators{{
    {"<-->", Tok::Iff},  {"<->", Tok::Iff},   {"--->", Tok::Imp},  {"-->", Tok::Imp},
    {"->", Tok::Imp},    {"/\\", Tok::And},   {"\\/", Tok::Or},    {"&", Tok::And},
    {"|", Tok::Or},      {"~", Tok::Not},     {"!", Tok::Forall},  {"?", Tok::Exists},
    {"∀", Tok::Forall}, {"∃", Tok::Exists}, {"→", Tok::Imp},
    {"⟶", Tok::Imp},    {"↔", Tok::Iff},    {"⟷", Tok::Iff},
    {"∨", Tok::Or},     {"∧", Tok::And},    {"¬", Tok::Not},
    {"⊥", Tok::Falsity},
}};

bool is_id_char(char ch) {
  auto c = static_cast<unsigned char>(ch);
  return std::isalnum(c) || c == '_' || c == '\'';
}

std::vector<Token> lex_surface(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      while (i < text.size() && is_id_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      Tok kind = Tok::Ident;
      if (word == "forall") kind = Tok::Forall;
      else if (word == "exists") kind = Tok::Exists;
      else if (word == "falsity") kind = Tok::Falsity;
      else if (word == "truth") kind = Tok::Truth;
      out.push_back({kind, std::move(word), 0, start});
      continue;
    }
    if (ch == '#') {
      ++i;
      std::size_t digits = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (digits == i) throw ParseError(ParseFailure::MalformedToken, "expected digits after '#'", start);
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + digits, text.data() + i, value);
      if (ec != std::errc()) throw ParseError(ParseFailure::MalformedToken, "variable index out of range", start);
      out.push_back({Tok::Hash, std::string(text.substr(start, i - start)), value, start});
      continue;
    }
    switch (ch) {
      case '(': out.push_back({Tok::LParen, "(", 0, start}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", 0, start}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", 0, start}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", 0, start}); ++i; continue;
      default: break;
    }
    bool matched = false;
    for (const auto& op : kOperators) {
      if (text.substr(i, op.text.size()) == op.text) {
        out.push_back({op.kind, std::string(op.text), 0, start});
        i += op.text.size();
        matched = true;
        break;
      }
    }
    if (!matched && text.substr(i, 3) == "⊤") {
      out.push_back({Tok::Truth, "⊤", 0, start});
      i += 3;
      matched = true;
    }
    if (!matched) throw ParseError(ParseFailure::MalformedToken, "unexpected character", start);
  }
  out.push_back({Tok::End, "", 0, text.size()});
  return out;
}

class SurfaceParser {
 public:
  explicit SurfaceParser(std::string_view text) : tokens_(lex_surface(text)) {}

  Formula formula() {
    Formula f = iff();
    expect(Tok::End, "end of input");
    return f;
  }

  Term lone_term() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  const Token& next() { return tokens_[pos_++]; }

  bool accept(Tok kind) {
    if (!at(kind)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok kind, const char* what) {
    if (!at(kind)) {
      throw ParseError(ParseFailure::UnexpectedToken, std::string("expected ") + what, peek().pos);
    }
    return next();
  }

  Formula iff() {
    Formula lhs = imp();
    while (accept(Tok::Iff)) lhs = Formula::iff(std::move(lhs), imp());
    return lhs;
  }

  Formula imp() {
    Formula lhs = dis();
    if (accept(Tok::Imp)) return Formula::imp(std::move(lhs), imp());
    return lhs;
  }

  Formula dis() {
    Formula lhs = con();
    while (accept(Tok::Or)) lhs = Formula::dis(std::move(lhs), con());
    return lhs;
  }

  Formula con() {
    Formula lhs = unary();
    while (accept(Tok::And)) lhs = Formula::con(std::move(lhs), unary());
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::neg(unary());
    if (at(Tok::Forall) || at(Tok::Exists)) return quantified();
    return atom();
  }

  Formula quantified() {
    bool universal = next().kind == Tok::Forall;
    std::size_t names = 0;
    do {
      const Token& name = expect(Tok::Ident, "bound variable name");
      binders_.push_back(name.text);
      ++names;
    } while (at(Tok::Ident));
    expect(Tok::Dot, "'.' after bound variables");
    Formula body = iff();
    for (std::size_t i = 0; i < names; ++i) {
      binders_.pop_back();
      body = universal ? Formula::uni(std::move(body)) : Formula::exi(std::move(body));
    }
    return body;
  }

  Formula atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Falsity:
        ++pos_;
        return Formula::falsity();
      case Tok::Truth:
        ++pos_;
        return Formula::truth();
      case Tok::LParen: {
        ++pos_;
        Formula f = iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        ++pos_;
        std::vector<Term> args;
        if (accept(Tok::LParen)) args = term_list();
        note_arity(sig_.predicates, tok, args.size());
        return Formula::pre(tok.text, std::move(args));
      }
      default:
        throw ParseError(ParseFailure::UnexpectedToken, "expected a formula", tok.pos);
    }
  }

  // After '(' up to and including ')'.
  std::vector<Term> term_list() {
    std::vector<Term> args;
    if (accept(Tok::RParen)) return args;
    do {
      args.push_back(term());
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')' or ','");
    return args;
  }

  Term term() {
    const Token& tok = peek();
    if (tok.kind == Tok::Hash) {
      ++pos_;
      return Term::var(tok.index);
    }
    if (tok.kind != Tok::Ident) throw ParseError(ParseFailure::UnexpectedToken, "expected a term", tok.pos);
    ++pos_;
    if (accept(Tok::LParen)) {
      std::vector<Term> args = term_list();
      note_arity(sig_.functions, tok, args.size());
      return Term::fun(tok.text, std::move(args));
    }
    for (std::size_t k = binders_.size(); k-- > 0;) {
      if (binders_[k] == tok.text) return Term::var(binders_.size() - 1 - k);
    }
    if (is_variable_like(tok.text)) {
      throw ParseError(ParseFailure::UnboundVariable, "unbound variable '" + tok.text + "'", tok.pos);
    }
    note_arity(sig_.functions, tok, 0);
    return Term::fun(tok.text);
  }

  static void note_arity(std::map<Id, std::size_t>& table, const Token& tok, std::size_t arity) {
    auto [it, inserted] = table.emplace(tok.text, arity);
    if (!inserted && it->second != arity) {
      throw ParseError(ParseFailure::ArityClash,
                       "symbol '" + tok.text + "' used with arity " + std::to_string(arity) +
                           " and " + std::to_string(it->second),
                       tok.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> binders_;
  Signature sig_;
};

// Constructor form.

enum class DTok { Word, Number, String, LBracket, RBracket, LParen, RParen, Comma, End };

struct DToken {
  DTok kind;
  std::string text;
  std::size_t pos = 0;
};

std::vector<DToken> lex_deep(std::string_view text) {
  std::vector<DToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    std::size_t start = i;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      while (i < text.size() && is_id_char(text[i])) ++i;
      out.push_back({DTok::Word, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({DTok::Number, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (text.substr(i, 2) == "''") {
      i += 2;
      std::string value;
      for (;;) {
        if (i >= text.size()) throw ParseError(ParseFailure::MalformedToken, "unterminated string", start);
        if (text[i] == '\\') {
          if (i + 1 >= text.size()) throw ParseError(ParseFailure::MalformedToken, "dangling escape", i);
          value.push_back(text[i + 1]);
          i += 2;
          continue;
        }
        if (text.substr(i, 2) == "''") {
          i += 2;
          break;
        }
        value.push_back(text[i++]);
      }
      out.push_back({DTok::String, std::move(value), start});
      continue;
    }
    DTok kind;
    switch (ch) {
      case '[': kind = DTok::LBracket; break;
      case ']': kind = DTok::RBracket; break;
      case '(': kind = DTok::LParen; break;
      case ')': kind = DTok::RParen; break;
      case ',': kind = DTok::Comma; break;
      default: throw ParseError(ParseFailure::MalformedToken, "unexpected character", start);
    }
    out.push_back({kind, std::string(1, ch), start});
    ++i;
  }
  out.push_back({DTok::End, "", text.size()});
  return out;
}

class DeepParser {
 public:
  explicit DeepParser(std::string_view text) : tokens_(lex_deep(text)) {}

  Formula whole_formula() {
    Formula f = formula();
    finish();
    return f;
  }

  Term whole_term() {
    Term t = term();
    finish();
    return t;
  }

  std::vector<Formula> whole_formula_list() {
    expect(DTok::LBracket, "'['");
    std::vector<Formula> out;
    if (!accept(DTok::RBracket)) {
      do {
        out.push_back(formula());
      } while (accept(DTok::Comma));
      expect(DTok::RBracket, "']' or ','");
    }
    finish();
    return out;
  }

 private:
  const DToken& peek() const { return tokens_[pos_]; }
  bool at(DTok kind) const { return peek().kind == kind; }

  bool accept(DTok kind) {
    if (!at(kind)) return false;
    ++pos_;
    return true;
  }

  const DToken& expect(DTok kind, const char* what) {
    if (!at(kind)) {
      throw ParseError(ParseFailure::UnexpectedToken, std::string("expected ") + what, peek().pos);
    }
    return tokens_[pos_++];
  }

  void finish() { expect(DTok::End, "end of input"); }

  bool word(std::string_view w) {
    if (at(DTok::Word) && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }

  Formula formula() {
    const DToken& tok = peek();
    if (accept(DTok::LParen)) {
      Formula f = formula();
      expect(DTok::RParen, "')'");
      return f;
    }
    if (word("Falsity")) return Formula::falsity();
    if (word("Pre")) {
      Id name = symbol();
      return Formula::pre(std::move(name), term_list());
    }
    if (word("Imp")) {
      Formula lhs = operand();
      return Formula::imp(std::move(lhs), operand());
    }
    if (word("Dis")) {
      Formula lhs = operand();
      return Formula::dis(std::move(lhs), operand());
    }
    if (word("Con")) {
      Formula lhs = operand();
      return Formula::con(std::move(lhs), operand());
    }
    if (word("Exi")) return Formula::exi(operand());
    if (word("Uni")) return Formula::uni(operand());
    throw ParseError(ParseFailure::UnexpectedToken, "expected a formula constructor", tok.pos);
  }

  Formula operand() {
    if (word("Falsity")) return Formula::falsity();
    expect(DTok::LParen, "'(' or Falsity");
    Formula f = formula();
    expect(DTok::RParen, "')'");
    return f;
  }

  Term term() {
    const DToken& tok = peek();
    if (accept(DTok::LParen)) {
      Term t = term();
      expect(DTok::RParen, "')'");
      return t;
    }
    if (word("Var")) {
      const DToken& num = expect(DTok::Number, "variable index");
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), value);
      if (ec != std::errc()) throw ParseError(ParseFailure::MalformedToken, "variable index out of range", num.pos);
      return Term::var(value);
    }
    if (word("Fun")) {
      Id name = symbol();
      return Term::fun(std::move(name), term_list());
    }
    throw ParseError(ParseFailure::UnexpectedToken, "expected Var or Fun", tok.pos);
  }

  std::vector<Term> term_list() {
    expect(DTok::LBracket, "'['");
    std::vector<Term> out;
    if (accept(DTok::RBracket)) return out;
    do {
      out.push_back(term());
    } while (accept(DTok::Comma));
    expect(DTok::RBracket, "']' or ','");
    return out;
  }

  Id symbol() {
    const DToken& tok = peek();
    if (!at(DTok::String) && !at(DTok::Word)) {
      throw ParseError(ParseFailure::UnexpectedToken, "expected a symbol", tok.pos);
    }
    ++pos_;
    if (!is_valid_id(tok.text)) {
      throw ParseError(ParseFailure::BadIdentifier, "invalid identifier '" + tok.text + "'", tok.pos);
    }
    return tok.text;
  }

  std::vector<DToken> tokens_;
  std::size_t pos_ = 0;
};

void check_arities(const Formula& f) {
  Signature sig;
  if (auto clash = collect_signature(f, sig)) {
    throw ParseError(ParseFailure::ArityClash, "symbol '" + *clash + "' used with more than one arity", 0);
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return SurfaceParser(text).formula(); }

Term parse_term(std::string_view text) { return SurfaceParser(text).lone_term(); }

Formula parse_deep_formula(std::string_view text) {
  Formula f = DeepParser(text).whole_formula();
  check_arities(f);
  return f;
}

Term parse_deep_term(std::string_view text) {
  Term t = DeepParser(text).whole_term();
  Signature sig;
  if (auto clash = collect_signature(t, sig)) {
    throw ParseError(ParseFailure::ArityClash, "symbol '" + *clash + "' used with more than one arity", 0);
  }
  return t;
}

std::vector<Formula> parse_deep_formula_list(std::string_view text) {
  auto out = DeepParser(text).whole_formula_list();
  for (const auto& f : out) check_arities(f);
  return out;
}

}  // namespace natded
