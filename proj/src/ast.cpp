#include "pact/ast.hpp"

#include <algorithm>
#include <sstream>

namespace pact {

TermPtr Term::constant(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Constant;
  t->name = std::move(name);
  return t;
}

TermPtr Term::variable(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Variable;
  t->name = std::move(name);
  return t;
}

TermPtr Term::function(std::string name, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::FunctionApp;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}

TermPtr Term::description(std::string bound_var, FormulaPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Description;
  t->name = std::move(bound_var);
  t->body = std::move(body);
  return t;
}

static std::shared_ptr<Formula> node(FormulaKind kind) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  return f;
}

FormulaPtr Formula::truth() { return node(FormulaKind::True); }
FormulaPtr Formula::falsity() { return node(FormulaKind::False); }

FormulaPtr Formula::atom(std::string pred, std::vector<TermPtr> args) {
  auto f = node(FormulaKind::Atom);
  f->pred = std::move(pred);
  f->terms = std::move(args);
  return f;
}

FormulaPtr Formula::equals(TermPtr lhs, TermPtr rhs) {
  auto f = node(FormulaKind::Equals);
  f->terms = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::negate(FormulaPtr inner) {
  auto f = node(FormulaKind::Not);
  f->kids = {std::move(inner)};
  return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> kids) {
  auto f = node(FormulaKind::And);
  f->kids = std::move(kids);
  return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> kids) {
  auto f = node(FormulaKind::Or);
  f->kids = std::move(kids);
  return f;
}

FormulaPtr Formula::implies(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = node(FormulaKind::Implies);
  f->kids = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
  auto f = node(FormulaKind::Exists);
  f->var = std::move(var);
  f->kids = {std::move(body)};
  return f;
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
  auto f = node(FormulaKind::Forall);
  f->var = std::move(var);
  f->kids = {std::move(body)};
  return f;
}

static FormulaPtr modal1(FormulaKind kind, std::string agent, FormulaPtr inner) {
  auto f = node(kind);
  f->agent1 = std::move(agent);
  f->kids = {std::move(inner)};
  return f;
}

static FormulaPtr modal2(FormulaKind kind, std::string a1, std::string a2,
                         FormulaPtr inner) {
  auto f = node(kind);
  f->agent1 = std::move(a1);
  f->agent2 = std::move(a2);
  f->kids = {std::move(inner)};
  return f;
}

FormulaPtr Formula::bel(std::string agent, FormulaPtr f) {
  return modal1(FormulaKind::Bel, std::move(agent), std::move(f));
}

FormulaPtr Formula::intend(std::string agent, FormulaPtr f) {
  return modal1(FormulaKind::Int, std::move(agent), std::move(f));
}

FormulaPtr Formula::mb(std::string a1, std::string a2, FormulaPtr f) {
  return modal2(FormulaKind::MB, std::move(a1), std::move(a2), std::move(f));
}

FormulaPtr Formula::coll_int(std::string a1, std::string a2, FormulaPtr f) {
  return modal2(FormulaKind::CollInt, std::move(a1), std::move(a2), std::move(f));
}

FormulaPtr Formula::coll_acc(std::string a1, std::string a2, FormulaPtr f) {
  return modal2(FormulaKind::CollAcc, std::move(a1), std::move(a2), std::move(f));
}

FormulaPtr Formula::done(ActExprPtr act, FormulaPtr cond) {
  auto f = node(FormulaKind::Done);
  f->act = std::move(act);
  f->kids = {std::move(cond)};
  return f;
}

FormulaPtr Formula::possible(FormulaPtr inner) {
  auto f = node(FormulaKind::Possible);
  f->kids = {std::move(inner)};
  return f;
}

FormulaPtr Formula::fvar(std::string name) {
  auto f = node(FormulaKind::FVar);
  f->pred = std::move(name);
  return f;
}

ActExprPtr ActExpr::atomic(std::string act_type, std::string actor,
                           std::vector<ActParam> params) {
  auto a = std::make_shared<ActExpr>();
  a->kind = ActExprKind::Atomic;
  a->act_type = std::move(act_type);
  a->actor = std::move(actor);
  a->params = std::move(params);
  return a;
}

ActExprPtr ActExpr::seq(ActExprPtr lhs, ActExprPtr rhs) {
  auto a = std::make_shared<ActExpr>();
  a->kind = ActExprKind::Seq;
  a->lhs = std::move(lhs);
  a->rhs = std::move(rhs);
  return a;
}

ActExprPtr ActExpr::choice(ActExprPtr lhs, ActExprPtr rhs) {
  auto a = std::make_shared<ActExpr>();
  a->kind = ActExprKind::Choice;
  a->lhs = std::move(lhs);
  a->rhs = std::move(rhs);
  return a;
}

bool equal(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  switch (a.kind) {
    case TermKind::Constant:
    case TermKind::Variable:
      return true;
    case TermKind::FunctionApp:
      if (a.args.size() != b.args.size()) return false;
      for (size_t i = 0; i < a.args.size(); ++i)
        if (!equal(*a.args[i], *b.args[i])) return false;
      return true;
    case TermKind::Description:
      return equal(*a.body, *b.body);
  }
  return false;
}

bool equal(const ActParam& a, const ActParam& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<TermPtr>(a))
    return equal(*std::get<TermPtr>(a), *std::get<TermPtr>(b));
  return equal(*std::get<FormulaPtr>(a), *std::get<FormulaPtr>(b));
}

bool equal(const ActExpr& a, const ActExpr& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ActExprKind::Atomic) {
    if (a.act_type != b.act_type || a.actor != b.actor) return false;
    if (a.params.size() != b.params.size()) return false;
    for (size_t i = 0; i < a.params.size(); ++i)
      if (!equal(a.params[i], b.params[i])) return false;
    return true;
  }
  return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
}

bool equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::FVar:
      return a.pred == b.pred;
    case FormulaKind::Atom:
      if (a.pred != b.pred || a.terms.size() != b.terms.size()) return false;
      break;
    case FormulaKind::Equals:
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (a.var != b.var) return false;
      break;
    case FormulaKind::Bel:
    case FormulaKind::Int:
      if (a.agent1 != b.agent1) return false;
      break;
    case FormulaKind::MB:
    case FormulaKind::CollInt:
    case FormulaKind::CollAcc:
      if (a.agent1 != b.agent1 || a.agent2 != b.agent2) return false;
      break;
    case FormulaKind::Done:
      if (!equal(*a.act, *b.act)) return false;
      break;
    default:
      break;
  }
  if (a.terms.size() != b.terms.size()) return false;
  for (size_t i = 0; i < a.terms.size(); ++i)
    if (!equal(*a.terms[i], *b.terms[i])) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

// Precedence levels, loosest first: implies < or < and < unary.
namespace {

constexpr int kPrecImplies = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecUnary = 4;

int precedence(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Implies: return kPrecImplies;
    case FormulaKind::Or: return kPrecOr;
    case FormulaKind::And: return kPrecAnd;
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall: return kPrecUnary;
    default: return 5;  // atoms, modal applications: never parenthesized
  }
}

void print_into(const Formula& f, std::ostringstream& out);
void print_child(const Formula& child, int min_prec, std::ostringstream& out);

void print_into(const Term& t, std::ostringstream& out) {
  switch (t.kind) {
    case TermKind::Constant:
      out << t.name;
      return;
    case TermKind::Variable:
      out << '?' << t.name;
      return;
    case TermKind::FunctionApp:
      out << t.name << '(';
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) out << ", ";
        print_into(*t.args[i], out);
      }
      out << ')';
      return;
    case TermKind::Description:
      out << "iota ?" << t.name << " . ";
      print_child(*t.body, kPrecUnary, out);
      return;
  }
}

void print_into(const ActExpr& a, std::ostringstream& out) {
  switch (a.kind) {
    case ActExprKind::Atomic:
      out << a.act_type << '(' << a.actor;
      for (const auto& p : a.params) {
        out << ", ";
        if (std::holds_alternative<TermPtr>(p))
          print_into(*std::get<TermPtr>(p), out);
        else
          print_into(*std::get<FormulaPtr>(p), out);
      }
      out << ')';
      return;
    case ActExprKind::Seq:
      out << '(';
      print_into(*a.lhs, out);
      out << "; ";
      print_into(*a.rhs, out);
      out << ')';
      return;
    case ActExprKind::Choice:
      out << '(';
      print_into(*a.lhs, out);
      out << " | ";
      print_into(*a.rhs, out);
      out << ')';
      return;
  }
}

void print_child(const Formula& child, int min_prec, std::ostringstream& out) {
  if (precedence(child) < min_prec) {
    out << '(';
    print_into(child, out);
    out << ')';
  } else {
    print_into(child, out);
  }
}

void print_into(const Formula& f, std::ostringstream& out) {
  switch (f.kind) {
    case FormulaKind::True:
      out << "true";
      return;
    case FormulaKind::False:
      out << "false";
      return;
    case FormulaKind::FVar:
      out << '?' << f.pred;
      return;
    case FormulaKind::Atom:
      out << f.pred;
      if (!f.terms.empty()) {
        out << '(';
        for (size_t i = 0; i < f.terms.size(); ++i) {
          if (i) out << ", ";
          print_into(*f.terms[i], out);
        }
        out << ')';
      }
      return;
    case FormulaKind::Equals:
      print_into(*f.terms[0], out);
      out << " = ";
      print_into(*f.terms[1], out);
      return;
    case FormulaKind::Not:
      out << "not ";
      print_child(*f.kids[0], kPrecUnary, out);
      return;
    case FormulaKind::And:
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out << " and ";
        print_child(*f.kids[i], kPrecAnd + 1, out);
      }
      return;
    case FormulaKind::Or:
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out << " or ";
        print_child(*f.kids[i], kPrecOr + 1, out);
      }
      return;
    case FormulaKind::Implies:
      print_child(*f.kids[0], kPrecImplies + 1, out);
      out << " => ";
      print_child(*f.kids[1], kPrecImplies, out);  // right-associative
      return;
    case FormulaKind::Exists:
      out << "exists ?" << f.var << " . ";
      print_child(*f.kids[0], kPrecUnary, out);
      return;
    case FormulaKind::Forall:
      out << "forall ?" << f.var << " . ";
      print_child(*f.kids[0], kPrecUnary, out);
      return;
    case FormulaKind::Bel:
    case FormulaKind::Int: {
      out << (f.kind == FormulaKind::Bel ? "Bel(" : "Int(") << f.agent1 << ", ";
      print_into(*f.kids[0], out);
      out << ')';
      return;
    }
    case FormulaKind::MB:
    case FormulaKind::CollInt:
    case FormulaKind::CollAcc: {
      const char* name = f.kind == FormulaKind::MB        ? "MB"
                         : f.kind == FormulaKind::CollInt ? "CollInt"
                                                          : "CollAcc";
      out << name << '(' << f.agent1 << ", " << f.agent2 << ", ";
      print_into(*f.kids[0], out);
      out << ')';
      return;
    }
    case FormulaKind::Done:
      out << "Done(";
      print_into(*f.act, out);
      if (f.kids[0]->kind != FormulaKind::True) {
        out << ", ";
        print_into(*f.kids[0], out);
      }
      out << ')';
      return;
    case FormulaKind::Possible:
      out << "Possible(";
      print_into(*f.kids[0], out);
      out << ')';
      return;
  }
}

}  // namespace

std::string print(const Term& t) {
  std::ostringstream out;
  print_into(t, out);
  return out.str();
}

std::string print(const Formula& f) {
  std::ostringstream out;
  print_into(f, out);
  return out.str();
}

std::string print(const ActExpr& a) {
  std::ostringstream out;
  print_into(a, out);
  return out.str();
}

namespace {

int modal_depth_act(const ActExpr& a);

int modal_depth_term(const Term& t) {
  switch (t.kind) {
    case TermKind::Description:
      return modal_depth(*t.body);
    case TermKind::FunctionApp: {
      int d = 0;
      for (const auto& arg : t.args) d = std::max(d, modal_depth_term(*arg));
      return d;
    }
    default:
      return 0;
  }
}

int modal_depth_act(const ActExpr& a) {
  if (a.kind != ActExprKind::Atomic)
    return std::max(modal_depth_act(*a.lhs), modal_depth_act(*a.rhs));
  int d = 0;
  for (const auto& p : a.params) {
    if (std::holds_alternative<FormulaPtr>(p))
      d = std::max(d, modal_depth(*std::get<FormulaPtr>(p)));
    else
      d = std::max(d, modal_depth_term(*std::get<TermPtr>(p)));
  }
  return d;
}

}  // namespace

int modal_depth(const Formula& f) {
  int inner = 0;
  for (const auto& k : f.kids) inner = std::max(inner, modal_depth(*k));
  for (const auto& t : f.terms) inner = std::max(inner, modal_depth_term(*t));
  if (f.act) inner = std::max(inner, modal_depth_act(*f.act));
  switch (f.kind) {
    case FormulaKind::Bel:
    case FormulaKind::Int:
    case FormulaKind::MB:
    case FormulaKind::CollInt:
    case FormulaKind::CollAcc:
      return inner + 1;
    default:
      return inner;
  }
}

namespace {

void free_vars_term(const Term& t, std::vector<std::string>& bound,
                    std::vector<std::string>& out);

void free_vars(const Formula& f, std::vector<std::string>& bound,
               std::vector<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(f.var);
      free_vars(*f.kids[0], bound, out);
      bound.pop_back();
      return;
    default:
      break;
  }
  for (const auto& t : f.terms) free_vars_term(*t, bound, out);
  for (const auto& k : f.kids) free_vars(*k, bound, out);
  if (f.act) {
    const ActExpr* stack[64];
    size_t n = 0;
    stack[n++] = f.act.get();
    while (n) {
      const ActExpr* a = stack[--n];
      if (a->kind != ActExprKind::Atomic) {
        if (n + 2 <= 64) {
          stack[n++] = a->lhs.get();
          stack[n++] = a->rhs.get();
        }
        continue;
      }
      for (const auto& p : a->params) {
        if (std::holds_alternative<TermPtr>(p))
          free_vars_term(*std::get<TermPtr>(p), bound, out);
        else
          free_vars(*std::get<FormulaPtr>(p), bound, out);
      }
    }
  }
}

void free_vars_term(const Term& t, std::vector<std::string>& bound,
                    std::vector<std::string>& out) {
  switch (t.kind) {
    case TermKind::Variable:
      if (std::find(bound.begin(), bound.end(), t.name) == bound.end())
        out.push_back(t.name);
      return;
    case TermKind::FunctionApp:
      for (const auto& arg : t.args) free_vars_term(*arg, bound, out);
      return;
    case TermKind::Description:
      bound.push_back(t.name);
      free_vars(*t.body, bound, out);
      bound.pop_back();
      return;
    default:
      return;
  }
}

bool has_fvar(const Formula& f) {
  if (f.kind == FormulaKind::FVar) return true;
  for (const auto& k : f.kids)
    if (has_fvar(*k)) return true;
  for (const auto& t : f.terms)
    if (t->kind == TermKind::Description && has_fvar(*t->body)) return true;
  if (f.act) {
    std::vector<const ActExpr*> stack{f.act.get()};
    while (!stack.empty()) {
      const ActExpr* a = stack.back();
      stack.pop_back();
      if (a->kind != ActExprKind::Atomic) {
        stack.push_back(a->lhs.get());
        stack.push_back(a->rhs.get());
        continue;
      }
      if (a->actor.rfind('?', 0) == 0) return true;
      for (const auto& p : a->params)
        if (std::holds_alternative<FormulaPtr>(p) &&
            has_fvar(*std::get<FormulaPtr>(p)))
          return true;
    }
  }
  return false;
}

}  // namespace

bool is_ground(const Term& t) {
  std::vector<std::string> bound, free;
  free_vars_term(t, bound, free);
  if (!free.empty()) return false;
  if (t.kind == TermKind::Description) return !has_fvar(*t.body);
  return true;
}

bool is_ground(const Formula& f) {
  std::vector<std::string> bound, free;
  free_vars(f, bound, free);
  return free.empty() && !has_fvar(f);
}

bool is_ground(const ActExpr& a) {
  if (a.kind != ActExprKind::Atomic) return is_ground(*a.lhs) && is_ground(*a.rhs);
  if (a.actor.rfind('?', 0) == 0) return false;
  for (const auto& p : a.params) {
    if (std::holds_alternative<TermPtr>(p)) {
      if (!is_ground(*std::get<TermPtr>(p))) return false;
    } else if (!is_ground(*std::get<FormulaPtr>(p))) {
      return false;
    }
  }
  return true;
}

void collect_ground_terms(const Term& t, std::vector<TermPtr>& out) {
  switch (t.kind) {
    case TermKind::Constant:
      out.push_back(Term::constant(t.name));
      return;
    case TermKind::Variable:
      return;
    case TermKind::FunctionApp: {
      if (is_ground(t)) {
        auto copy = std::make_shared<Term>(t);
        out.push_back(copy);
      }
      for (const auto& arg : t.args) collect_ground_terms(*arg, out);
      return;
    }
    case TermKind::Description:
      if (is_ground(t)) out.push_back(std::make_shared<Term>(t));
      collect_ground_terms(*t.body, out);
      return;
  }
}

void collect_ground_terms(const Formula& f, std::vector<TermPtr>& out) {
  for (const auto& t : f.terms) collect_ground_terms(*t, out);
  for (const auto& k : f.kids) collect_ground_terms(*k, out);
  if (f.act) {
    std::vector<const ActExpr*> stack{f.act.get()};
    while (!stack.empty()) {
      const ActExpr* a = stack.back();
      stack.pop_back();
      if (a->kind != ActExprKind::Atomic) {
        stack.push_back(a->lhs.get());
        stack.push_back(a->rhs.get());
        continue;
      }
      for (const auto& p : a->params) {
        if (std::holds_alternative<TermPtr>(p))
          collect_ground_terms(*std::get<TermPtr>(p), out);
        else
          collect_ground_terms(*std::get<FormulaPtr>(p), out);
      }
    }
  }
}

}  // namespace pact
