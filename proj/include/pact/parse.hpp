#pragma once

#include <string>

#include "pact/ast.hpp"
#include "pact/errors.hpp"

namespace pact {

// Parses the formula text grammar (see docs/formula-grammar.md).
// Variables are written ?name and may occur free; templates and
// reaction-rule patterns rely on that. Throws SyntaxError.
FormulaPtr parse_formula(const std::string& text);

// Parses a standalone term (constant, ?variable, function application
// or iota description).
TermPtr parse_term(const std::string& text);

// Parses a standalone action expression, e.g. "inform(tom, laura, p)"
// or "(a1; a2)".
ActExprPtr parse_act_expr(const std::string& text);

}  // namespace pact
