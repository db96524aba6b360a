#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace pact {

struct Term;
struct Formula;
struct ActExpr;

using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;
using ActExprPtr = std::shared_ptr<const ActExpr>;

// Parameter of an atomic act expression: either an object-level term
// (an agent name, a representation handle) or a propositional payload.
using ActParam = std::variant<TermPtr, FormulaPtr>;

enum class TermKind { Constant, Variable, FunctionApp, Description };

// Terms of the object language. A Description is the definite-description
// binder iota ?v . body; its body is a formula over the bound variable.
struct Term {
  TermKind kind;
  std::string name;           // constant / variable / function / bound var
  std::vector<TermPtr> args;  // FunctionApp only
  FormulaPtr body;            // Description only

  static TermPtr constant(std::string name);
  static TermPtr variable(std::string name);
  static TermPtr function(std::string name, std::vector<TermPtr> args);
  static TermPtr description(std::string bound_var, FormulaPtr body);
};

enum class FormulaKind {
  True,
  False,
  Atom,
  Equals,
  Not,
  And,
  Or,
  Implies,
  Exists,
  Forall,
  Bel,
  Int,
  MB,
  CollInt,
  CollAcc,
  Done,
  Possible,
  FVar,  // formula placeholder, only legal in templates and patterns
};

// Immutable formula node. Modal agent slots hold constant names; a name
// beginning with '?' marks a template placeholder.
struct Formula {
  FormulaKind kind;
  std::string pred;             // Atom predicate / FVar name
  std::vector<TermPtr> terms;   // Atom args; Equals holds exactly [lhs, rhs]
  std::vector<FormulaPtr> kids; // logical children / modal content
  std::string var;              // Exists / Forall bound variable
  std::string agent1, agent2;   // modal operators
  ActExprPtr act;               // Done

  static FormulaPtr truth();
  static FormulaPtr falsity();
  static FormulaPtr atom(std::string pred, std::vector<TermPtr> args);
  static FormulaPtr equals(TermPtr lhs, TermPtr rhs);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(std::vector<FormulaPtr> kids);
  static FormulaPtr disj(std::vector<FormulaPtr> kids);
  static FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr exists(std::string var, FormulaPtr body);
  static FormulaPtr forall(std::string var, FormulaPtr body);
  static FormulaPtr bel(std::string agent, FormulaPtr f);
  static FormulaPtr intend(std::string agent, FormulaPtr f);
  static FormulaPtr mb(std::string a1, std::string a2, FormulaPtr f);
  static FormulaPtr coll_int(std::string a1, std::string a2, FormulaPtr f);
  static FormulaPtr coll_acc(std::string a1, std::string a2, FormulaPtr f);
  static FormulaPtr done(ActExprPtr act, FormulaPtr cond);
  static FormulaPtr possible(FormulaPtr f);
  static FormulaPtr fvar(std::string name);
};

enum class ActExprKind { Atomic, Seq, Choice };

struct ActExpr {
  ActExprKind kind;
  std::string act_type;         // Atomic
  std::string actor;            // Atomic; '?'-prefixed in patterns
  std::vector<ActParam> params; // Atomic
  ActExprPtr lhs, rhs;          // Seq / Choice

  static ActExprPtr atomic(std::string act_type, std::string actor,
                           std::vector<ActParam> params);
  static ActExprPtr seq(ActExprPtr lhs, ActExprPtr rhs);
  static ActExprPtr choice(ActExprPtr lhs, ActExprPtr rhs);
};

bool equal(const Term& a, const Term& b);
bool equal(const Formula& a, const Formula& b);
bool equal(const ActExpr& a, const ActExpr& b);
bool equal(const ActParam& a, const ActParam& b);

// Raw printers. They emit exactly the node structure they are given;
// use render() from logic.hpp for canonical output.
std::string print(const Term& t);
std::string print(const Formula& f);
std::string print(const ActExpr& a);

// Number of nested mental-attitude operators (Bel, Int, MB, CollInt,
// CollAcc). Done and Possible are transparent: their contents count,
// the node itself does not.
int modal_depth(const Formula& f);

bool is_ground(const Term& t);
bool is_ground(const Formula& f);
bool is_ground(const ActExpr& a);

// All ground terms usable as quantifier witnesses: constants, ground
// function applications and ground descriptions appearing anywhere.
void collect_ground_terms(const Formula& f, std::vector<TermPtr>& out);
void collect_ground_terms(const Term& t, std::vector<TermPtr>& out);

}  // namespace pact
