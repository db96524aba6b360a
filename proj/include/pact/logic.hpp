#pragma once

#include <map>
#include <optional>
#include <string>

#include "pact/ast.hpp"

namespace pact {

// Normal form: negations pushed down to atoms (modal operators stay
// opaque), And/And and Or/Or flattened, duplicate children dropped,
// children sorted by rendered text, trivial True/False simplified.
// Idempotent.
FormulaPtr normalize(FormulaPtr f);

// Canonical text: print(normalize(f)). parse(render(f)) == normalize(f).
std::string render(const FormulaPtr& f);
std::string render(const TermPtr& t);
std::string render(const ActExprPtr& a);

// Structural order on normalized rendering; used for canonical storage.
bool formula_less(const FormulaPtr& a, const FormulaPtr& b);

// Unfolds shared belief: MB(i,j,p) becomes Bel(i, p and MB(j,i,p)),
// applied `depth` times along each expansion chain. depth 0 is identity.
FormulaPtr unfold_mb(FormulaPtr f, int depth);

// Capture-avoiding replacement of free occurrences of ?var by the
// ground term. Throws NonGroundSubstitution if the term has variables.
FormulaPtr substitute(FormulaPtr f, const std::string& var, TermPtr t);
TermPtr substitute_term(TermPtr t, const std::string& var, TermPtr value);

// The reverse direction: every occurrence of the constant becomes the
// variable. Used to lift believed facts into descriptor templates.
FormulaPtr generalize(const FormulaPtr& f, const std::string& constant,
                      const std::string& var);

// Renames free occurrences of one variable to another. Intended for the
// reserved description/descriptor variables, which never collide with
// binders.
FormulaPtr rename_var(const FormulaPtr& f, const std::string& from,
                      const std::string& to);

// Bindings collected by match() or supplied to instantiate(). Term
// variables and formula placeholders share one namespace; modal agent
// slots written ?name bind to constants.
struct Bindings {
  std::map<std::string, TermPtr> terms;
  std::map<std::string, FormulaPtr> formulas;

  std::string agent(const std::string& name) const;
};

// One-way structural match of a pattern (formula with ?variables and
// ?placeholders) against a ground formula. Repeated variables must
// match equal subtrees.
std::optional<Bindings> match(const FormulaPtr& pattern, const FormulaPtr& ground);
std::optional<Bindings> match_act(const ActExprPtr& pattern, const ActExprPtr& ground);

// Replaces every free ?name in the template using the bindings: term
// variables by terms, formula placeholders by formulas, modal agent
// slots "?name" by the bound constant's name. Unbound names are left
// in place.
FormulaPtr instantiate(const FormulaPtr& tmpl, const Bindings& b);
ActExprPtr instantiate_act(const ActExprPtr& tmpl, const Bindings& b);

}  // namespace pact
