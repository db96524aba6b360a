#include "pact/parse.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace pact {

namespace {

enum class Tok {
  Ident,
  Var,      // ?name
  LParen,
  RParen,
  Comma,
  Dot,
  Semi,
  Bar,
  Eq,       // =
  Arrow,    // =>
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string> kReserved = {
    "and",  "or",  "not",     "true",    "false",   "exists", "forall",
    "iota", "Bel", "Int",     "MB",      "CollInt", "CollAcc", "Done",
    "Possible"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      step();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      current_.text = "<end>";
      return;
    }
    char c = text_[pos_];
    if (c == '(') { simple(Tok::LParen, "("); return; }
    if (c == ')') { simple(Tok::RParen, ")"); return; }
    if (c == ',') { simple(Tok::Comma, ","); return; }
    if (c == '.') { simple(Tok::Dot, "."); return; }
    if (c == ';') { simple(Tok::Semi, ";"); return; }
    if (c == '|') { simple(Tok::Bar, "|"); return; }
    if (c == '=') {
      step();
      if (pos_ < text_.size() && text_[pos_] == '>') {
        step();
        current_.kind = Tok::Arrow;
        current_.text = "=>";
      } else {
        current_.kind = Tok::Eq;
        current_.text = "=";
      }
      return;
    }
    if (c == '?') {
      step();
      std::string name = ident_tail();
      if (name.empty())
        throw SyntaxError(line_, column_, "identifier after '?'", "'?'");
      current_.kind = Tok::Var;
      current_.text = name;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      current_.kind = Tok::Ident;
      current_.text = ident_tail();
      return;
    }
    throw SyntaxError(line_, column_, "formula token", std::string("'") + c + "'");
  }

  std::string ident_tail() {
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        out += c;
        step();
      } else {
        break;
      }
    }
    return out;
  }

  void simple(Tok kind, const char* text) {
    step();
    current_.kind = kind;
    current_.text = text;
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  FormulaPtr formula() { return implies(); }

  TermPtr term() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "iota") return description();
    if (t.kind == Tok::Var) return Term::variable(lex_.take().text);
    if (t.kind == Tok::Ident) {
      if (kReserved.count(t.text))
        fail("term", "reserved word '" + t.text + "'");
      std::string name = lex_.take().text;
      if (lex_.peek().kind != Tok::LParen) return Term::constant(name);
      lex_.take();
      std::vector<TermPtr> args;
      args.push_back(term());
      while (lex_.peek().kind == Tok::Comma) {
        lex_.take();
        args.push_back(term());
      }
      expect(Tok::RParen, ")");
      return Term::function(name, std::move(args));
    }
    fail("term", describe(t));
    return nullptr;
  }

  ActExprPtr act_expr() {
    ActExprPtr acc = act_prim();
    while (true) {
      Tok k = lex_.peek().kind;
      if (k == Tok::Semi) {
        lex_.take();
        acc = ActExpr::seq(acc, act_prim());
      } else if (k == Tok::Bar) {
        lex_.take();
        acc = ActExpr::choice(acc, act_prim());
      } else {
        return acc;
      }
    }
  }

  void expect_end() {
    if (lex_.peek().kind != Tok::End) fail("end of input", describe(lex_.peek()));
  }

 private:
  FormulaPtr implies() {
    FormulaPtr lhs = disjunction();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return Formula::implies(lhs, implies());
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr acc = conjunction();
    std::vector<FormulaPtr> kids;
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "or") {
      if (kids.empty()) kids.push_back(acc);
      lex_.take();
      kids.push_back(conjunction());
    }
    return kids.empty() ? acc : Formula::disj(std::move(kids));
  }

  FormulaPtr conjunction() {
    FormulaPtr acc = unary();
    std::vector<FormulaPtr> kids;
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "and") {
      if (kids.empty()) kids.push_back(acc);
      lex_.take();
      kids.push_back(unary());
    }
    return kids.empty() ? acc : Formula::conj(std::move(kids));
  }

  // Quantifier bodies bind tightly: `exists ?x . p and q` scopes the
  // quantifier over p only. Compound bodies take parentheses.
  FormulaPtr unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "not") {
      lex_.take();
      return Formula::negate(unary());
    }
    if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
      bool is_exists = t.text == "exists";
      lex_.take();
      if (lex_.peek().kind != Tok::Var) fail("?variable", describe(lex_.peek()));
      std::string var = lex_.take().text;
      expect(Tok::Dot, ".");
      FormulaPtr body = unary();
      return is_exists ? Formula::exists(var, body) : Formula::forall(var, body);
    }
    return primary();
  }

  FormulaPtr primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      FormulaPtr f = formula();
      expect(Tok::RParen, ")");
      return f;
    }
    if (t.kind == Tok::Var) {
      Token v = lex_.take();
      if (lex_.peek().kind == Tok::Eq) {
        lex_.take();
        return Formula::equals(Term::variable(v.text), term());
      }
      return Formula::fvar(v.text);
    }
    if (t.kind != Tok::Ident) fail("formula", describe(t));

    if (t.text == "true") { lex_.take(); return Formula::truth(); }
    if (t.text == "false") { lex_.take(); return Formula::falsity(); }
    if (t.text == "Bel" || t.text == "Int") return modal1(lex_.take().text);
    if (t.text == "MB" || t.text == "CollInt" || t.text == "CollAcc")
      return modal2(lex_.take().text);
    if (t.text == "Done") return done();
    if (t.text == "Possible") {
      lex_.take();
      expect(Tok::LParen, "(");
      FormulaPtr inner = formula();
      expect(Tok::RParen, ")");
      return Formula::possible(inner);
    }
    if (kReserved.count(t.text)) fail("formula", "reserved word '" + t.text + "'");

    // Term-led: either an equality or a predicate application.
    TermPtr lhs = term();
    if (lex_.peek().kind == Tok::Eq) {
      lex_.take();
      return Formula::equals(lhs, term());
    }
    if (lhs->kind == TermKind::Constant) return Formula::atom(lhs->name, {});
    if (lhs->kind == TermKind::FunctionApp)
      return Formula::atom(lhs->name, lhs->args);
    fail("'=' after description term", describe(lex_.peek()));
    return nullptr;
  }

  FormulaPtr modal1(const std::string& op) {
    expect(Tok::LParen, "(");
    std::string agent = agent_name();
    expect(Tok::Comma, ",");
    FormulaPtr inner = formula();
    expect(Tok::RParen, ")");
    return op == "Bel" ? Formula::bel(agent, inner) : Formula::intend(agent, inner);
  }

  FormulaPtr modal2(const std::string& op) {
    expect(Tok::LParen, "(");
    std::string a1 = agent_name();
    expect(Tok::Comma, ",");
    std::string a2 = agent_name();
    expect(Tok::Comma, ",");
    FormulaPtr inner = formula();
    expect(Tok::RParen, ")");
    if (op == "MB") return Formula::mb(a1, a2, inner);
    if (op == "CollInt") return Formula::coll_int(a1, a2, inner);
    return Formula::coll_acc(a1, a2, inner);
  }

  FormulaPtr done() {
    lex_.take();  // Done
    expect(Tok::LParen, "(");
    ActExprPtr act = act_expr();
    FormulaPtr cond = Formula::truth();  // Done(a) = Done(a, true)
    if (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      cond = formula();
    }
    expect(Tok::RParen, ")");
    return Formula::done(act, cond);
  }

  TermPtr description() {
    lex_.take();  // iota
    if (lex_.peek().kind != Tok::Var) fail("?variable", describe(lex_.peek()));
    std::string var = lex_.take().text;
    expect(Tok::Dot, ".");
    FormulaPtr body = unary();
    return Term::description(var, body);
  }

  ActExprPtr act_prim() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      ActExprPtr a = act_expr();
      expect(Tok::RParen, ")");
      return a;
    }
    if (t.kind != Tok::Ident || kReserved.count(t.text))
      fail("action expression", describe(t));
    std::string type = lex_.take().text;
    expect(Tok::LParen, "(");
    std::string actor = agent_name();
    std::vector<ActParam> params;
    while (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      params.push_back(act_param());
    }
    expect(Tok::RParen, ")");
    return ActExpr::atomic(type, actor, std::move(params));
  }

  // A parameter is parsed with the formula grammar; a bare identifier
  // collapses to a constant term, a bare description stays a term.
  ActParam act_param() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "iota") {
      TermPtr d = description();
      if (lex_.peek().kind == Tok::Eq) {
        lex_.take();
        return ActParam(FormulaPtr(Formula::equals(d, term())));
      }
      return ActParam(d);
    }
    FormulaPtr f = formula();
    if (f->kind == FormulaKind::Atom && f->terms.empty())
      return ActParam(TermPtr(Term::constant(f->pred)));
    return ActParam(f);
  }

  std::string agent_name() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Var) return "?" + lex_.take().text;
    if (t.kind == Tok::Ident && !kReserved.count(t.text)) return lex_.take().text;
    fail("agent name", describe(t));
    return {};
  }

  void expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) fail(std::string("'") + what + "'", describe(lex_.peek()));
    lex_.take();
  }

  [[noreturn]] void fail(const std::string& expected, const std::string& found) {
    const Token& t = lex_.peek();
    throw SyntaxError(t.line, t.column, expected, found);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::Var) return "'?" + t.text + "'";
    return "'" + t.text + "'";
  }

  Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p(text);
  FormulaPtr f = p.formula();
  p.expect_end();
  return f;
}

TermPtr parse_term(const std::string& text) {
  Parser p(text);
  TermPtr t = p.term();
  p.expect_end();
  return t;
}

ActExprPtr parse_act_expr(const std::string& text) {
  Parser p(text);
  ActExprPtr a = p.act_expr();
  p.expect_end();
  return a;
}

}  // namespace pact
