#include <map>
#include <random>

#include "doctest.h"
#include "pact/ast.hpp"
#include "pact/errors.hpp"
#include "pact/logic.hpp"
#include "pact/parse.hpp"

using namespace pact;

namespace {

// Small random AST generator for the round-trip and idempotence
// properties. Fixed seed keeps runs reproducible.
struct Gen {
  std::mt19937_64 rng{20240707};

  int pick(int n) { return static_cast<int>(rng() % n); }

  TermPtr term(int depth, bool vars) {
    static const char* consts[] = {"a", "b", "c", "l", "m"};
    static const char* funcs[] = {"name", "addr"};
    int kind = pick(depth > 0 ? (vars ? 4 : 3) : (vars ? 2 : 1));
    switch (kind) {
      case 0:
        return Term::constant(consts[pick(5)]);
      case 1:
        if (vars) return Term::variable(pick(2) ? "x" : "y");
        return Term::function(funcs[pick(2)], {term(depth - 1, vars)});
      case 2:
        return Term::function(funcs[pick(2)], {term(depth - 1, vars)});
      default:
        return Term::description("x", Formula::atom("p", {Term::variable("x")}));
    }
  }

  FormulaPtr atom(bool vars) {
    static const char* preds[] = {"p", "q", "rel"};
    int arity = pick(3);
    std::vector<TermPtr> args;
    for (int i = 0; i < arity; ++i) args.push_back(term(1, vars));
    return Formula::atom(preds[pick(3)], std::move(args));
  }

  FormulaPtr formula(int depth, bool vars) {
    if (depth <= 0) {
      switch (pick(4)) {
        case 0: return Formula::truth();
        case 1: return Formula::equals(term(1, vars), term(1, vars));
        default: return atom(vars);
      }
    }
    switch (pick(10)) {
      case 0: return Formula::negate(formula(depth - 1, vars));
      case 1:
      case 2: {
        std::vector<FormulaPtr> kids;
        int n = 2 + pick(2);
        for (int i = 0; i < n; ++i) kids.push_back(formula(depth - 1, vars));
        return pick(2) ? Formula::conj(kids) : Formula::disj(kids);
      }
      case 3:
        return Formula::implies(formula(depth - 1, vars), formula(depth - 1, vars));
      case 4:
        return Formula::bel(pick(2) ? "tom" : "laura", formula(depth - 1, vars));
      case 5:
        return Formula::mb("tom", "laura", formula(depth - 1, vars));
      case 6:
        return Formula::intend(pick(2) ? "tom" : "laura", formula(depth - 1, vars));
      case 7: {
        FormulaPtr body = Formula::atom("p", {Term::variable("z")});
        return pick(2) ? Formula::exists("z", body) : Formula::forall("z", body);
      }
      case 8:
        return Formula::done(
            ActExpr::atomic("inform", "tom",
                            {ActParam(TermPtr(Term::constant("laura"))),
                             ActParam(formula(0, vars))}),
            pick(2) ? Formula::truth() : formula(0, vars));
      default:
        return atom(vars);
    }
  }
};

// Independent free-variable walker used as the substitution oracle: no
// capture handling needed because it only runs where binders for the
// variable are absent.
FormulaPtr naive_subst(const FormulaPtr& f, const std::string& var, const TermPtr& t);

TermPtr naive_subst_term(const TermPtr& term, const std::string& var, const TermPtr& t) {
  switch (term->kind) {
    case TermKind::Variable:
      return term->name == var ? t : term;
    case TermKind::FunctionApp: {
      std::vector<TermPtr> args;
      for (const auto& a : term->args) args.push_back(naive_subst_term(a, var, t));
      return Term::function(term->name, args);
    }
    case TermKind::Description:
      if (term->name == var) return term;
      return Term::description(term->name, naive_subst(term->body, var, t));
    default:
      return term;
  }
}

FormulaPtr naive_subst(const FormulaPtr& f, const std::string& var, const TermPtr& t) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) &&
      f->var == var)
    return f;
  auto g = std::make_shared<Formula>(*f);
  for (auto& x : g->terms) x = naive_subst_term(x, var, t);
  for (auto& k : g->kids) k = naive_subst(k, var, t);
  if (g->act && g->act->kind == ActExprKind::Atomic) {
    auto a = std::make_shared<ActExpr>(*g->act);
    for (auto& p : a->params) {
      if (std::holds_alternative<TermPtr>(p))
        p = ActParam(naive_subst_term(std::get<TermPtr>(p), var, t));
      else
        p = ActParam(naive_subst(std::get<FormulaPtr>(p), var, t));
    }
    g->act = a;
  }
  return g;
}

}  // namespace

TEST_CASE("parse: modal equality example") {
  FormulaPtr f = parse_formula("Bel(tom, name(l) = chezDominique)");
  REQUIRE(f->kind == FormulaKind::Bel);
  CHECK(f->agent1 == "tom");
  const FormulaPtr& eq = f->kids[0];
  REQUIRE(eq->kind == FormulaKind::Equals);
  CHECK(eq->terms[0]->kind == TermKind::FunctionApp);
  CHECK(eq->terms[0]->name == "name");
  CHECK(eq->terms[1]->name == "chezDominique");
}

TEST_CASE("parse: Done(a) abbreviates Done(a, true)") {
  FormulaPtr f = parse_formula("Done(inform(tom, laura, p))");
  REQUIRE(f->kind == FormulaKind::Done);
  CHECK(f->kids[0]->kind == FormulaKind::True);
  CHECK(f->act->kind == ActExprKind::Atomic);
  CHECK(f->act->act_type == "inform");
  CHECK(f->act->actor == "tom");
  REQUIRE(f->act->params.size() == 2);
  // And it re-renders without the explicit true.
  CHECK(render(f) == "Done(inform(tom, laura, p))");
}

TEST_CASE("parse: MB with binary conjunction") {
  FormulaPtr f = parse_formula("MB(tom, laura, frontOf(l, h) and basketballCourt(h))");
  REQUIRE(f->kind == FormulaKind::MB);
  CHECK(f->agent1 == "tom");
  CHECK(f->agent2 == "laura");
  REQUIRE(f->kids[0]->kind == FormulaKind::And);
  CHECK(f->kids[0]->kids.size() == 2);
}

TEST_CASE("parse: syntax errors carry position and expectation") {
  try {
    parse_formula("Bel(tom,, p)");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 9);
    CHECK(!e.expected.empty());
  }
  CHECK_THROWS_AS(parse_formula("p and"), SyntaxError);
  CHECK_THROWS_AS(parse_formula(""), SyntaxError);
  CHECK_THROWS_AS(parse_formula("iota ?x"), SyntaxError);
}

TEST_CASE("render: canonical conjunct order") {
  FormulaPtr f = Formula::conj({Formula::atom("q", {}), Formula::atom("p", {})});
  CHECK(render(f) == "p and q");
}

TEST_CASE("render: round-trips the modal equality") {
  FormulaPtr f = Formula::bel(
      "tom", Formula::equals(Term::function("name", {Term::constant("l")}),
                             Term::constant("c")));
  CHECK(render(f) == "Bel(tom, name(l) = c)");
  CHECK(equal(*parse_formula(render(f)), *normalize(f)));
}

TEST_CASE("normalize: double negation and De Morgan") {
  FormulaPtr p = Formula::atom("p", {});
  FormulaPtr q = Formula::atom("q", {});
  CHECK(render(Formula::negate(Formula::negate(p))) == "p");
  CHECK(render(Formula::negate(Formula::conj({p, q}))) == "not p or not q");
}

TEST_CASE("normalize: modal operators are opaque to negation") {
  FormulaPtr f = Formula::negate(Formula::bel("tom", Formula::atom("p", {})));
  FormulaPtr n = normalize(f);
  REQUIRE(n->kind == FormulaKind::Not);
  CHECK(n->kids[0]->kind == FormulaKind::Bel);
}

TEST_CASE("unfold_mb: zero depth is the identity") {
  FormulaPtr f = parse_formula("MB(tom, laura, p)");
  CHECK(equal(*unfold_mb(f, 0), *f));
}

TEST_CASE("unfold_mb: single unfolding step") {
  FormulaPtr f = parse_formula("MB(tom, laura, p)");
  FormulaPtr expect = parse_formula("Bel(tom, p and MB(laura, tom, p))");
  CHECK(equal(*normalize(unfold_mb(f, 1)), *normalize(expect)));
}

TEST_CASE("unfold_mb: depth two equals the hand-derived double application") {
  // Applying the definition MB(i,j,p) = Bel(i, p and MB(j,i,p)) twice
  // by hand:
  FormulaPtr f = parse_formula("MB(tom, laura, p)");
  FormulaPtr expect =
      parse_formula("Bel(tom, p and Bel(laura, p and MB(tom, laura, p)))");
  CHECK(equal(*normalize(unfold_mb(f, 2)), *normalize(expect)));
}

TEST_CASE("unfold_mb: composition property") {
  Gen gen;
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = gen.formula(3, false);
    FormulaPtr two_steps = unfold_mb(unfold_mb(f, 1), 1);
    CHECK(equal(*normalize(two_steps), *normalize(unfold_mb(f, 2))));
  }
}

TEST_CASE("unfold_mb: no top-level MB remains after unfolding") {
  FormulaPtr f = parse_formula("MB(tom, laura, q(l)) and MB(laura, tom, p)");
  FormulaPtr u = normalize(unfold_mb(f, 1));
  REQUIRE(u->kind == FormulaKind::And);
  for (const auto& k : u->kids) CHECK(k->kind == FormulaKind::Bel);
}

TEST_CASE("substitute: free occurrence") {
  FormulaPtr f = Formula::atom("phi", {Term::variable("x")});
  CHECK(render(substitute(f, "x", Term::constant("l"))) == "phi(l)");
}

TEST_CASE("substitute: binder shadows") {
  FormulaPtr f = parse_formula("exists ?x . phi(?x)");
  CHECK(equal(*substitute(f, "x", Term::constant("l")), *f));
}

TEST_CASE("substitute: under modality") {
  FormulaPtr f = parse_formula("Bel(tom, name(?x) = c)");
  CHECK(render(substitute(f, "x", Term::constant("l"))) == "Bel(tom, name(l) = c)");
}

TEST_CASE("substitute: rejects non-ground replacement terms") {
  FormulaPtr f = parse_formula("phi(?x)");
  CHECK_THROWS_AS(substitute(f, "x", Term::variable("y")), NonGroundSubstitution);
}

TEST_CASE("substitute: agrees with the naive walker on binder-free inputs") {
  Gen gen;
  int checked = 0;
  for (int i = 0; i < 400 && checked < 100; ++i) {
    FormulaPtr f = gen.formula(3, true);
    // The naive walker ignores capture, so restrict to inputs without
    // binders for x.
    std::string text = render(f);
    if (text.find("exists ?x") != std::string::npos ||
        text.find("forall ?x") != std::string::npos ||
        text.find("iota ?x") != std::string::npos)
      continue;
    TermPtr l = Term::constant("l");
    CHECK(equal(*normalize(substitute(f, "x", l)), *normalize(naive_subst(f, "x", l))));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("property: parse after render equals normalize") {
  Gen gen;
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = gen.formula(3, false);
    FormulaPtr n = normalize(f);
    CAPTURE(render(f));
    CHECK(equal(*parse_formula(render(f)), *n));
  }
}

TEST_CASE("property: normalize is idempotent") {
  Gen gen;
  for (int i = 0; i < 500; ++i) {
    FormulaPtr n = normalize(gen.formula(3, false));
    CHECK(equal(*normalize(n), *n));
  }
}

TEST_CASE("property: render is injective on normalized formulas") {
  Gen gen;
  std::map<std::string, FormulaPtr> seen;
  for (int i = 0; i < 2000; ++i) {
    FormulaPtr n = normalize(gen.formula(3, false));
    auto [it, inserted] = seen.emplace(print(*n), n);
    if (!inserted) CHECK(equal(*it->second, *n));
  }
}

TEST_CASE("act expressions: left re-association and rendering") {
  ActExprPtr a = parse_act_expr("inform(tom, laura, p); accept(laura, tom, p) | nudge(tom, laura, p)");
  // Parsed left-associatively: ((inform ; accept) | nudge).
  CHECK(a->kind == ActExprKind::Choice);
  CHECK(a->lhs->kind == ActExprKind::Seq);
  FormulaPtr done = Formula::done(a, Formula::truth());
  CHECK(equal(*parse_formula(render(done)), *normalize(done)));
}

TEST_CASE("descriptions parse inside payload atoms") {
  FormulaPtr f = parse_formula(
      "referedBy(iota ?x . (beenTogether(?x) and restaurant(?x)), o)");
  REQUIRE(f->kind == FormulaKind::Atom);
  CHECK(f->pred == "referedBy");
  REQUIRE(f->terms.size() == 2);
  CHECK(f->terms[0]->kind == TermKind::Description);
  CHECK(f->terms[1]->kind == TermKind::Constant);
  CHECK(equal(*parse_formula(render(f)), *normalize(f)));
}
